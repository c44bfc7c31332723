"""plotviz command line: render region JSON and frontier CSV artifacts to image files."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .render import PlotStyle, load_curve_csv, load_region, render_projection_2d, render_region_3d


def _style_from(args) -> PlotStyle:
    style = PlotStyle()
    if args.clip_box:
        lo, hi = (float(v) for v in args.clip_box.split(","))
        style.clip_box = (lo, hi)
    if args.view:
        az, el = (float(v) for v in args.view.split(","))
        style.azim, style.elev = az, el
    return style


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="plotviz",
                                 description="Render rate-region JSON / frontier CSV files.")
    sub = ap.add_subparsers(dest="command", required=True)

    p3 = sub.add_parser("region3d", help="3-d region figure from a region JSON file")
    p3.add_argument("region", help="region JSON path")
    p3.add_argument("--out", required=True)
    p3.add_argument("--clip-box", help="lo,hi bounds for unbounded rays (default -3,3)")
    p3.add_argument("--view", help="azimuth,elevation in degrees")
    p3.add_argument("--title", default="")

    p2 = sub.add_parser("proj2d", help="2-d frontier projection from curve CSV files")
    p2.add_argument("curve", help="frontier CSV path")
    p2.add_argument("--overlay", help="comparison curve CSV (e.g. the teleportation line)")
    p2.add_argument("--gap-json", help="gap JSON emitted alongside the curves")
    p2.add_argument("--out", required=True)
    p2.add_argument("--clip-box")
    p2.add_argument("--view")
    p2.add_argument("--title", default="")

    args = ap.parse_args(argv)
    try:
        if args.command == "region3d":
            region = load_region(args.region)
            render_region_3d(region, _style_from(args), title=args.title, out=args.out)
        else:
            curve = load_curve_csv(args.curve)
            overlay = None
            if args.overlay:
                if not Path(args.overlay).exists():
                    raise FileNotFoundError(f"overlay file {args.overlay} not found")
                overlay = load_curve_csv(args.overlay)
            gap = gap_at = None
            if args.gap_json:
                payload = json.loads(Path(args.gap_json).read_text())
                gap = float(payload["gap"])
                gap_at = float(payload.get("quantum_rate")) \
                    if "quantum_rate" in payload else None
            render_projection_2d(curve, overlay, gap=gap, gap_at=gap_at,
                                 style=_style_from(args), title=args.title, out=args.out)
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
