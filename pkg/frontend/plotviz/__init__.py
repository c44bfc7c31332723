"""Render exported rate-region JSON and frontier CSV files as figures.

This package consumes only the documented interchange formats (region JSON
with points/rays/facets, frontier CSV with vertex/ray rows, gap JSON); it
never recomputes any entropic quantity.
"""

from .render import (PlotStyle, load_curve_csv, load_region, render_projection_2d,
                     render_region_3d)

__version__ = "0.1.0"
