"""Deterministic matplotlib rendering of rate-region JSON and frontier CSV files."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from mpl_toolkits.mplot3d.art3d import Poly3DCollection  # noqa: E402

AXIS_LABELS = ("C (cbits)", "Q (qubits)", "E (ebits)")

# known protocol directions for ray labeling (unnormalized forms)
_PROTOCOL_RAYS = {
    "TP": np.array([-2.0, 1.0, -1.0]),
    "SD": np.array([2.0, -1.0, -1.0]),
    "ED": np.array([0.0, -1.0, 1.0]),
}


@dataclass
class PlotStyle:
    """Pinned style so identical inputs render pixel-identical figures."""

    clip_box: tuple = (-3.0, 3.0)
    azim: float = -60.0
    elev: float = 22.0
    dpi: int = 110
    figsize: tuple = (6.4, 5.2)
    face_colors: tuple = ("#4878cf", "#6acc65", "#d65f5f", "#b47cc7",
                          "#c4ad66", "#77bedb", "#e5ae38", "#8c613c")
    face_alpha: float = 0.55
    point_color: str = "#222222"
    ray_colors: dict = field(default_factory=lambda: {"TP": "#1f4e9c", "SD": "#b02020",
                                                      "ED": "#1a7a28", "ray": "#666666"})


def load_region(path) -> dict:
    data = json.loads(Path(path).read_text())
    out = {
        "points": np.asarray(data.get("points", []), dtype=float).reshape(-1, 3),
        "rays": np.asarray(data.get("rays", []), dtype=float).reshape(-1, 3),
    }
    facets = data.get("facets")
    if facets:
        out["facets"] = [(np.asarray(f["normal"], dtype=float), float(f["offset"]))
                         for f in facets]
    else:
        out["facets"] = None
    return out


# ---------------------------------------------------------------------------
# box-clipped polygon extraction from the half-space description
# ---------------------------------------------------------------------------

def _box_planes(lo: float, hi: float):
    planes = []
    for i in range(3):
        e = np.zeros(3)
        e[i] = 1.0
        planes.append((e, hi))
        planes.append((-e, -lo))
    return planes


def _polytope_vertices(planes, tol: float = 1e-8):
    verts = []
    for trio in combinations(range(len(planes)), 3):
        A = np.asarray([planes[i][0] for i in trio])
        b = np.asarray([planes[i][1] for i in trio])
        if abs(np.linalg.det(A)) < 1e-10:
            continue
        v = np.linalg.solve(A, b)
        if all(a @ v <= off + tol for a, off in planes):
            verts.append(v)
    uniq = []
    for v in sorted(verts, key=lambda p: (round(p[0], 9), round(p[1], 9), round(p[2], 9))):
        if not any(np.max(np.abs(v - u)) <= 1e-7 for u in uniq):
            uniq.append(v)
    return uniq


def _facet_polygon(vertices, normal, offset, tol: float = 1e-7):
    on = [v for v in vertices if abs(normal @ v - offset) <= tol]
    if len(on) < 3:
        return None
    n = normal / np.linalg.norm(normal)
    seed = np.array([1.0, 0.0, 0.0]) if abs(n[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    u = np.cross(n, seed)
    u /= np.linalg.norm(u)
    w = np.cross(n, u)
    center = np.mean(on, axis=0)
    angles = [np.arctan2((v - center) @ w, (v - center) @ u) for v in on]
    order = np.argsort(angles)
    return [on[i] for i in order]


def _ray_label(direction) -> str:
    d = direction / np.linalg.norm(direction)
    for name, proto in _PROTOCOL_RAYS.items():
        if np.max(np.abs(d - proto / np.linalg.norm(proto))) < 1e-6:
            return name
    return "ray"


def render_region_3d(region: dict, style: PlotStyle | None = None, *,
                     title: str = "", out=None):
    """Draw facet polygons clipped to the style box, generator points, labeled rays.

    Regions without a facet list fall back to a points-only scatter.
    """
    style = style or PlotStyle()
    lo, hi = style.clip_box
    fig = plt.figure(figsize=style.figsize, dpi=style.dpi)
    ax = fig.add_subplot(projection="3d")
    ax.view_init(elev=style.elev, azim=style.azim)

    if region.get("facets"):
        planes = list(region["facets"]) + _box_planes(lo, hi)
        verts = _polytope_vertices(planes)
        polys, colors = [], []
        for k, (a, b) in enumerate(region["facets"]):
            poly = _facet_polygon(verts, a, b)
            if poly is not None:
                polys.append(poly)
                colors.append(style.face_colors[k % len(style.face_colors)])
        if polys:
            coll = Poly3DCollection(polys, alpha=style.face_alpha, facecolors=colors,
                                    edgecolors="#303030", linewidths=0.7)
            ax.add_collection3d(coll)

    pts = region["points"]
    if len(pts):
        ax.scatter(pts[:, 0], pts[:, 1], pts[:, 2], color=style.point_color,
                   s=18, depthshade=False)

    anchor = pts[0] if len(pts) else np.zeros(3)
    for ray in region["rays"]:
        name = _ray_label(ray)
        t = _exit_parameter(anchor, ray, lo, hi)
        end = anchor + t * ray
        color = style.ray_colors.get(name, style.ray_colors["ray"])
        ax.plot(*np.column_stack([anchor, end]), color=color, linewidth=1.8)
        if name != "ray":
            ax.text(*(end * 1.02), name, color=color, fontsize=9)

    ax.set_xlim(lo, hi)
    ax.set_ylim(lo, hi)
    ax.set_zlim(lo, hi)
    ax.set_xlabel(AXIS_LABELS[0])
    ax.set_ylabel(AXIS_LABELS[1])
    ax.set_zlabel(AXIS_LABELS[2])
    if title:
        ax.set_title(title)
    if out is not None:
        fig.savefig(out, dpi=style.dpi)
        plt.close(fig)
    return fig


def _exit_parameter(anchor, direction, lo, hi) -> float:
    t = np.inf
    for i in range(3):
        if direction[i] > 1e-12:
            t = min(t, (hi - anchor[i]) / direction[i])
        elif direction[i] < -1e-12:
            t = min(t, (lo - anchor[i]) / direction[i])
    return 0.0 if not np.isfinite(t) else float(t)


# ---------------------------------------------------------------------------
# 2-d frontier projections
# ---------------------------------------------------------------------------

def load_curve_csv(path) -> dict:
    lines = Path(path).read_text().strip().splitlines()
    header = lines[0].split(",")
    axes = (header[1], header[2])
    vertices, ray_low, ray_high = [], None, None
    for line in lines[1:]:
        kind, u, v = line.split(",")
        vec = np.array([float(u), float(v)])
        if kind == "vertex":
            vertices.append(vec)
        elif kind == "ray_low":
            ray_low = vec
        elif kind == "ray_high":
            ray_high = vec
        else:
            raise ValueError(f"unknown curve row kind {kind!r} in {path}")
    if not vertices:
        raise ValueError(f"curve {path} has no vertex rows")
    return {"axes": axes, "vertices": np.asarray(vertices),
            "ray_low": ray_low, "ray_high": ray_high}


def _polyline(curve: dict, reach: float):
    pts = [curve["vertices"][0]]
    if curve["ray_low"] is not None:
        pts = [curve["vertices"][0] + reach * curve["ray_low"]] + pts
    pts.extend(curve["vertices"][1:])
    if curve["ray_high"] is not None:
        pts.append(curve["vertices"][-1] + reach * curve["ray_high"])
    return np.asarray(pts)


def _value_at(curve: dict, u: float) -> float:
    """Second coordinate of the (extended) frontier polyline at first coordinate u."""
    chain = _polyline(curve, reach=1e6)
    for a, b in zip(chain[:-1], chain[1:]):
        lo, hi = sorted((a[0], b[0]))
        if lo - 1e-9 <= u <= hi + 1e-9 and abs(b[0] - a[0]) > 1e-12:
            t = (u - a[0]) / (b[0] - a[0])
            return float(a[1] + t * (b[1] - a[1]))
    raise ValueError(f"u = {u} is outside the curve's reach")


def render_projection_2d(curve: dict, overlay: dict | None = None, *,
                         gap: float | None = None, gap_at: float | None = None,
                         style: PlotStyle | None = None, title: str = "", out=None):
    """Plot a Pareto frontier polyline, an optional comparison line, and the ebit gap."""
    style = style or PlotStyle()
    fig, ax = plt.subplots(figsize=(6.4, 4.4), dpi=style.dpi)
    reach = 2.5
    chain = _polyline(curve, reach)
    ax.plot(chain[:, 0], chain[:, 1], color="#1f4e9c", linewidth=2.0,
            label="channel coding + unit protocols")
    ax.scatter(curve["vertices"][:, 0], curve["vertices"][:, 1], color="#1f4e9c", s=22)

    if overlay is not None:
        oc = _polyline(overlay, reach)
        ax.plot(oc[:, 0], oc[:, 1], color="#b02020", linewidth=1.8, linestyle="--",
                label="teleportation only")

    if gap is not None and overlay is not None:
        u0 = gap_at if gap_at is not None else float(np.max(curve["vertices"][:, 0]) + 0.25)
        v_curve = _value_at(curve, u0)
        v_over = _value_at(overlay, u0)
        ax.annotate("", xy=(u0, v_curve), xytext=(u0, v_over),
                    arrowprops={"arrowstyle": "<->", "color": "#222222"})
        ax.text(u0 + 0.05, (v_curve + v_over) / 2, f"gap = {gap:.3f} ebits/use",
                fontsize=9, color="#222222")

    ax.set_xlabel(curve["axes"][0] + " (qubits/use)")
    ax.set_ylabel(curve["axes"][1] + " (ebits/use)")
    ax.grid(True, linewidth=0.4, alpha=0.5)
    ax.legend(loc="upper right", fontsize=8)
    if title:
        ax.set_title(title)
    if out is not None:
        fig.savefig(out, dpi=style.dpi)
        plt.close(fig)
    return fig
