"""Polyhedral geometry of rate regions in (C, Q, E) space.

A region is generator-represented: the convex hull of a nonempty point list
plus the cone of a ray list.  The half-space description is derived on demand
by a 3-d specialized double-description pass (candidate facet normals come
from cross products of generator difference vectors and rays, filtered by
support checks) and cached.  Rate triples are plain length-3 arrays ordered
(C, Q, E); positive components are generated resources, negative consumed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .lp import nonneg_combination, simplex_solve

AXES = ("C", "Q", "E")
GEOM_TOL = 1e-9


class EmptyRegionError(ValueError):
    """An operation produced an empty region (regions must contain a point)."""


def as_triple(x) -> np.ndarray:
    v = np.asarray(x, dtype=float).reshape(-1)
    if v.shape != (3,):
        raise ValueError(f"expected a rate triple (C, Q, E), got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"rate triple must be finite, got {v}")
    return v


def unit_ray(direction) -> np.ndarray:
    d = as_triple(direction)
    n = float(np.linalg.norm(d))
    if n < 1e-12:
        raise ValueError("ray direction must be nonzero")
    return d / n


# ---------------------------------------------------------------------------
# Sign-pattern specs for octants / quadrants
# ---------------------------------------------------------------------------

_SIGN_ALIASES = {"+": "+", "-": "-", "0": "0", "±": "*", "*": "*", "~": "*", "x": "*"}


@dataclass(frozen=True)
class OrthantSpec:
    """Per-axis sign constraints: '+' (>= 0), '-' (<= 0), '0' (= 0), '*' (free)."""

    signs: tuple[str, str, str]

    def __post_init__(self):
        if len(self.signs) != 3 or any(s not in "+-0*" for s in self.signs):
            raise ValueError(f"bad sign pattern {self.signs}")

    @classmethod
    def parse(cls, text) -> "OrthantSpec":
        if isinstance(text, OrthantSpec):
            return text
        raw = [ch for ch in str(text) if ch not in ", ()"]
        try:
            signs = tuple(_SIGN_ALIASES[ch] for ch in raw)
        except KeyError as exc:
            raise ValueError(f"bad sign character in {text!r}") from exc
        return cls(signs)  # length checked in __post_init__

    @property
    def is_free(self) -> bool:
        return all(s == "*" for s in self.signs)

    def halfspaces(self):
        """Equality and inequality rows (a, b) meaning a.x = b / a.x <= b."""
        eqs, ineqs = [], []
        for i, s in enumerate(self.signs):
            e = np.zeros(3)
            e[i] = 1.0
            if s == "0":
                eqs.append((e, 0.0))
            elif s == "+":
                ineqs.append((-e, 0.0))
            elif s == "-":
                ineqs.append((e, 0.0))
        return eqs, ineqs

    def contains(self, x, tol: float = GEOM_TOL) -> bool:
        x = as_triple(x)
        for i, s in enumerate(self.signs):
            if s == "0" and abs(x[i]) > tol:
                return False
            if s == "+" and x[i] < -tol:
                return False
            if s == "-" and x[i] > tol:
                return False
        return True

    def __str__(self):
        return "".join("±" if s == "*" else s for s in self.signs)


# ---------------------------------------------------------------------------
# Regions
# ---------------------------------------------------------------------------

def _dedup_rows(rows: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    if len(rows) == 0:
        return rows
    kept = []
    for r in rows:
        if not any(np.max(np.abs(r - k)) <= tol for k in kept):
            kept.append(r)
    return np.asarray(kept)


class RateRegion:
    """conv(points) + cone(rays) in (C, Q, E) space."""

    def __init__(self, points, rays=()):
        pts = np.asarray(points, dtype=float).reshape(-1, 3)
        if pts.shape[0] == 0:
            raise EmptyRegionError("a region needs at least one generator point "
                                   "(list the origin explicitly if intended)")
        if not np.all(np.isfinite(pts)):
            raise ValueError("generator points must be finite")
        rys = np.asarray(rays, dtype=float).reshape(-1, 3)
        if rys.shape[0]:
            norms = np.linalg.norm(rys, axis=1)
            if np.any(norms < 1e-12):
                raise ValueError("ray directions must be nonzero")
            rys = rys / norms[:, None]
        self.points = _dedup_rows(pts)
        self.rays = _dedup_rows(rys)
        self.points.flags.writeable = False
        self.rays.flags.writeable = False
        self._facets: FacetDescription | None = None

    def __repr__(self):
        return f"RateRegion({len(self.points)} points, {len(self.rays)} rays)"

    def contains(self, x, tol: float = 1e-8) -> bool:
        return contains(self, x, tol)

    def facet_description(self) -> "FacetDescription":
        if self._facets is None:
            self._facets = facets_3d(self)
        return self._facets

    def translate(self, shift) -> "RateRegion":
        return RateRegion(self.points + as_triple(shift), self.rays)


def minkowski_sum(a: RateRegion, b: RateRegion) -> RateRegion:
    """Set addition: all pairwise point sums, union of rays."""
    pts = (a.points[:, None, :] + b.points[None, :, :]).reshape(-1, 3)
    rays = np.vstack([a.rays, b.rays]) if (len(a.rays) or len(b.rays)) else np.zeros((0, 3))
    return RateRegion(pts, rays)


def contains(region: RateRegion, x, tol: float = 1e-8) -> bool:
    """LP membership: x is a convex point combination plus a nonnegative ray sum."""
    x = as_triple(x)
    cols = np.vstack([region.points, region.rays]).T
    found, _, _ = nonneg_combination(cols, x, convex_prefix=len(region.points), tol=tol)
    return found


def extremum(region: RateRegion, objective, *, fixed=None, sense: str = "max"):
    """Optimize a linear objective over the region, optionally pinning axes.

    ``fixed`` maps axis index (or name in AXES) to a required coordinate value.
    Returns (value, achieving triple); an unbounded objective gives +/-inf.
    """
    obj = as_triple(objective)
    fixed = fixed or {}
    rows, rhs = [], []
    for key, val in fixed.items():
        i = AXES.index(key) if isinstance(key, str) else int(key)
        e = np.zeros(3)
        e[i] = 1.0
        rows.append(e)
        rhs.append(float(val))
    gens = np.vstack([region.points, region.rays])
    npts = len(region.points)
    A = np.array([[g @ r for g in gens] for r in rows]).reshape(len(rows), len(gens))
    A = np.vstack([A, np.concatenate([np.ones(npts), np.zeros(len(region.rays))])])
    b = np.array(rhs + [1.0])
    sign = -1.0 if sense == "max" else 1.0
    c = sign * (gens @ obj)
    res = simplex_solve(c, A, b)
    if res.status == "infeasible":
        raise ValueError(f"fixed coordinates {fixed} are not attainable in this region")
    if res.status == "unbounded":
        return (float("inf") if sense == "max" else float("-inf")), None
    x = gens.T @ res.x
    return float(obj @ x), x


# ---------------------------------------------------------------------------
# Facet enumeration (3-d specialized)
# ---------------------------------------------------------------------------

@dataclass
class FacetDescription:
    """Half-space description: affine-hull equalities plus facet inequalities."""

    dim: int
    basepoint: np.ndarray
    equalities: list = field(default_factory=list)     # (a, b): a.x = b
    inequalities: list = field(default_factory=list)   # (a, b): a.x <= b

    def all_inequalities(self):
        out = list(self.inequalities)
        for a, b in self.equalities:
            out.append((a, b))
            out.append((-a, -b))
        return out

    def contains(self, x, tol: float = GEOM_TOL) -> bool:
        x = as_triple(x)
        for a, b in self.equalities:
            if abs(a @ x - b) > tol:
                return False
        for a, b in self.inequalities:
            if a @ x - b > tol:
                return False
        return True


def _scale_halfspace(a: np.ndarray, b: float):
    s = float(np.max(np.abs(a)))
    return a / s, b / s


def _sign_fix(a: np.ndarray, b: float):
    nz = np.flatnonzero(np.abs(a) > 1e-12)
    if nz.size and a[nz[0]] < 0:
        return -a, -b
    return a, b


def _dedup_halfspaces(rows, tol: float = GEOM_TOL):
    kept = []
    for a, b in rows:
        if not any(np.max(np.abs(a - a2)) <= tol and abs(b - b2) <= tol for a2, b2 in kept):
            kept.append((a, b))
    return kept


def _rank(mat: np.ndarray, tol: float = 1e-7) -> int:
    if mat.size == 0:
        return 0
    s = np.linalg.svd(mat, compute_uv=False)
    return int(np.sum(s > tol * max(1.0, s[0])))


def _axis_preferring_complement(basis: np.ndarray) -> list[np.ndarray]:
    """Orthonormal complement of the columns of ``basis``, axis-aligned when possible."""
    have = [basis[:, j] for j in range(basis.shape[1])]
    out = []
    for i in range(3):
        e = np.zeros(3)
        e[i] = 1.0
        r = e.copy()
        for v in have + out:
            r = r - (v @ r) * v
        if np.linalg.norm(r) > 1e-9:
            out.append(r / np.linalg.norm(r))
    return out


def _prune_interior_points(pts: np.ndarray, rays: np.ndarray) -> np.ndarray:
    keep = []
    idx = np.lexsort(pts.T[::-1])
    pts = pts[idx]
    for i in range(len(pts)):
        others = np.vstack([pts[:i], pts[i + 1:]])
        if others.size == 0:
            keep.append(pts[i])
            continue
        cols = np.vstack([others, rays]).T if len(rays) else others.T
        found, _, _ = nonneg_combination(cols, pts[i], convex_prefix=len(others), tol=1e-9)
        if not found:
            keep.append(pts[i])
    if not keep:
        keep.append(pts[0])
    return np.asarray(keep)


def _facets_full_dim(pts, rays, tol):
    diffs = []
    for i, j in combinations(range(len(pts)), 2):
        d = pts[j] - pts[i]
        if np.linalg.norm(d) > 1e-12:
            diffs.append(d / np.linalg.norm(d))
    dirs = diffs + [r for r in rays]
    cands = []
    for u, v in combinations(dirs, 2):
        n = np.cross(u, v)
        ln = np.linalg.norm(n)
        if ln > 1e-9:
            cands.append(n / ln)
    found = []
    for n0 in cands:
        for n in (n0, -n0):
            off = float(np.max(pts @ n))
            if len(rays) and np.max(rays @ n) > tol:
                continue
            on_pts = pts[np.abs(pts @ n - off) <= 1e-8]
            on_rays = rays[np.abs(rays @ n) <= 1e-8] if len(rays) else rays
            face_dirs = [p - on_pts[0] for p in on_pts[1:]] + [r for r in on_rays]
            if face_dirs and _rank(np.asarray(face_dirs)) >= 2:
                found.append(_scale_halfspace(n, off))
    return _dedup_halfspaces(found)


def _facets_2d(y, ry, tol):
    diffs = []
    for i, j in combinations(range(len(y)), 2):
        d = y[j] - y[i]
        if np.linalg.norm(d) > 1e-12:
            diffs.append(d / np.linalg.norm(d))
    dirs = diffs + [r for r in ry]
    found = []
    for u in dirs:
        for n in (np.array([-u[1], u[0]]), np.array([u[1], -u[0]])):
            off = float(np.max(y @ n))
            if len(ry) and np.max(ry @ n) > tol:
                continue
            on_pts = y[np.abs(y @ n - off) <= 1e-8]
            on_rays = ry[np.abs(ry @ n) <= 1e-8] if len(ry) else ry
            if len(on_pts) >= 2 or (len(on_pts) >= 1 and len(on_rays) >= 1):
                found.append((n, off))
    kept = []
    for a, b in found:
        if not any(np.max(np.abs(a - a2)) <= tol and abs(b - b2) <= tol for a2, b2 in kept):
            kept.append((a, b))
    return kept


def facets_3d(region: RateRegion, tol: float = GEOM_TOL) -> FacetDescription:
    """Irredundant half-space description of a 3-d generator region.

    Degenerate (not full-dimensional) regions report their affine hull as
    equality constraints plus the facets within that hull.
    """
    pts, rays = region.points, region.rays
    if len(pts) > 24:
        pts = _prune_interior_points(pts, rays)
    p0 = pts[0]
    dir_rows = [p - p0 for p in pts[1:]] + [r for r in rays]
    dir_mat = np.asarray(dir_rows) if dir_rows else np.zeros((0, 3))
    k = _rank(dir_mat, tol=1e-8)

    if k == 3:
        ineqs = _facets_full_dim(pts, rays, tol)
        return FacetDescription(3, p0.copy(), [], ineqs)

    if k == 0:
        eqs = []
        for i in range(3):
            e = np.zeros(3)
            e[i] = 1.0
            eqs.append((e, float(p0[i])))
        return FacetDescription(0, p0.copy(), eqs, [])

    # basis of the affine hull and its complement
    _, _, vt = np.linalg.svd(dir_mat)
    basis = vt[:k].T                                   # 3 x k
    eqs = []
    for w in _axis_preferring_complement(basis):
        a, b = _sign_fix(*_scale_halfspace(w, float(w @ p0)))
        eqs.append((a, b))

    y = (pts - p0) @ basis                             # n x k projected coords
    ry = rays @ basis if len(rays) else np.zeros((0, k))

    ineqs = []
    if k == 1:
        yv = y[:, 0]
        rv = ry[:, 0] if len(ry) else np.zeros(0)
        up_unbounded = bool(len(rv) and np.max(rv) > tol)
        down_unbounded = bool(len(rv) and np.min(rv) < -tol)
        if not up_unbounded:
            ineqs.append((np.array([1.0]), float(np.max(yv))))
        if not down_unbounded:
            ineqs.append((np.array([-1.0]), float(-np.min(yv))))
    else:
        ineqs = _facets_2d(y, ry, tol)

    lifted = []
    for nk, h in ineqs:
        a3 = basis @ nk
        b3 = float(h + a3 @ p0)
        lifted.append(_scale_halfspace(a3, b3))
    return FacetDescription(k, p0.copy(), eqs, _dedup_halfspaces(lifted))


# ---------------------------------------------------------------------------
# H-rep -> V-rep (vertex and extreme-ray enumeration), used by clip
# ---------------------------------------------------------------------------

def _vrep_from_halfspaces(eqs, ineqs, tol: float = GEOM_TOL):
    if eqs:
        A = np.asarray([a for a, _ in eqs])
        b = np.asarray([v for _, v in eqs])
        x0, res, _, _ = np.linalg.lstsq(A, b, rcond=None)
        if np.max(np.abs(A @ x0 - b), initial=0.0) > 1e-8:
            return np.zeros((0, 3)), np.zeros((0, 3))
        _, s, vt = np.linalg.svd(A)
        rank = int(np.sum(s > 1e-9 * max(1.0, s[0] if len(s) else 1.0)))
        W = vt[rank:].T                                # null-space basis, 3 x k
    else:
        x0 = np.zeros(3)
        W = np.eye(3)
    k = W.shape[1]

    rows = []
    for a, b in ineqs:
        g = a @ W
        h = float(b - a @ x0)
        if np.max(np.abs(g), initial=0.0) <= 1e-12:
            if h < -tol:
                return np.zeros((0, 3)), np.zeros((0, 3))
            continue
        rows.append((g, h))
    # dedup projected rows
    uniq = []
    for g, h in rows:
        if not any(np.max(np.abs(g - g2)) <= 1e-12 and abs(h - h2) <= 1e-12
                   for g2, h2 in uniq):
            uniq.append((g, h))
    rows = uniq
    G = np.asarray([g for g, _ in rows]).reshape(len(rows), k)
    H = np.asarray([h for _, h in rows])

    def feasible(yv, slack=1e-9):
        return not len(rows) or np.max(G @ yv - H) <= slack

    verts = []
    if k == 0:
        if feasible(np.zeros(0)):
            verts.append(x0.copy())
        return (np.asarray(verts).reshape(-1, 3), np.zeros((0, 3)))

    for idx in combinations(range(len(rows)), k):
        sub = G[list(idx)]
        if _rank(sub, tol=1e-9) < k:
            continue
        try:
            yv = np.linalg.lstsq(sub, H[list(idx)], rcond=None)[0]
        except np.linalg.LinAlgError:
            continue
        if np.max(np.abs(sub @ yv - H[list(idx)])) <= 1e-8 and feasible(yv):
            verts.append(x0 + W @ yv)

    ray_dirs = []
    if k == 1:
        cand_dirs = [np.array([1.0]), np.array([-1.0])]
    else:
        cand_dirs = []
        for idx in combinations(range(len(rows)), k - 1):
            sub = G[list(idx)].reshape(k - 1, k)
            if _rank(sub, tol=1e-9) < k - 1:
                continue
            _, s, vt = np.linalg.svd(sub)
            d = vt[-1]
            cand_dirs.extend([d, -d])
    for d in cand_dirs:
        if len(rows) == 0 or np.max(G @ d) <= 1e-9:
            ray_dirs.append(d)
    # containing a full line means the region is not pointed
    for d in ray_dirs:
        for d2 in ray_dirs:
            if np.max(np.abs(d + d2)) <= 1e-9:
                raise ValueError("region is not pointed (contains a line); "
                                 "cannot enumerate generators")

    verts = _dedup_rows(np.asarray(verts).reshape(-1, 3), tol=1e-9)
    rays3 = []
    for d in ray_dirs:
        r = W @ d
        n = np.linalg.norm(r)
        if n > 1e-12:
            rays3.append(r / n)
    rays3 = _dedup_rows(np.asarray(rays3).reshape(-1, 3), tol=1e-9)
    return verts, rays3


def clip(region: RateRegion, orthant) -> RateRegion:
    """Intersect with a signed orthant/quadrant, returned again as generators."""
    spec = OrthantSpec.parse(orthant)
    if spec.is_free:
        return region
    fd = region.facet_description()
    o_eqs, o_ineqs = spec.halfspaces()
    eqs = list(fd.equalities) + o_eqs
    ineqs = list(fd.inequalities) + o_ineqs
    pts, rays = _vrep_from_halfspaces(eqs, ineqs)
    if len(pts) == 0:
        raise EmptyRegionError(f"intersection with {spec} is empty")
    return RateRegion(pts, rays)


def slide_and_clip(region: RateRegion, direction, target, *,
                   inverse: bool = False) -> RateRegion:
    """Translate along a protocol line, then keep the part in the target orthant.

    The forward map sends S to (S + L) ∩ target for the half-line L in
    ``direction``; with ``inverse=True`` the translation runs along -L instead,
    which undoes a forward slide.
    """
    d = unit_ray(direction)
    if inverse:
        d = -d
    slid = RateRegion(region.points, np.vstack([region.rays, d[None, :]]))
    return clip(slid, target)


# ---------------------------------------------------------------------------
# JSON schema
# ---------------------------------------------------------------------------

def region_to_dict(region: RateRegion, include_facets: bool = True) -> dict:
    out = {
        "points": [[float(v) for v in p] for p in region.points],
        "rays": [[float(v) for v in r] for r in region.rays],
    }
    if include_facets:
        fd = region.facet_description()
        out["facets"] = [{"normal": [float(v) for v in a], "offset": float(b)}
                         for a, b in fd.all_inequalities()]
        out["dim"] = fd.dim
    return out


def region_from_dict(data: dict) -> RateRegion:
    return RateRegion(np.asarray(data["points"], dtype=float),
                      np.asarray(data.get("rays", []), dtype=float).reshape(-1, 3))
