"""Seeded sweeps over ensembles and instruments to trace one-shot trade-off surfaces.

Every sample is drawn from a child generator keyed by (seed, sample index), so
point lists are reproducible, order-independent under parallel evaluation, and
stable when the sample budget grows (a larger sweep extends a smaller one).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import OrthantSpec, RateRegion, as_triple
from .quantum import DensityMatrix, Instrument, InvariantError, QuantumChannel
from .sigma import Ensemble, make_ensemble, single_state_ensemble
from .tradeoff import OneShotPoint, assemble_region, casr_point, cef_point

GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class SweepConfig:
    seed: int = 0
    samples: int = 64
    max_outcomes: int = 4
    refine_iters: int = 0
    grid: int | None = None       # structured-family resolution (qubit channels)

    def __post_init__(self):
        if self.samples < 0:
            raise ValueError("samples must be >= 0")
        if not 1 <= self.max_outcomes <= 16:
            raise ValueError("max_outcomes must lie in [1, 16]")
        if self.grid is not None and self.grid < 2:
            raise ValueError("grid needs at least 2 values")

    def to_dict(self) -> dict:
        return {"seed": self.seed, "samples": self.samples,
                "max_outcomes": self.max_outcomes, "refine_iters": self.refine_iters,
                "grid": self.grid}


def _rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng([seed & 0xFFFFFFFFFFFFFFFF, index])


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """QR of a complex Ginibre matrix with the R diagonal phase-fixed."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def haar_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    v /= np.linalg.norm(v)
    nz = np.flatnonzero(np.abs(v) > 1e-12)[0]
    return v * (np.conj(v[nz]) / np.abs(v[nz]))


def simplex_weights(k: int, rng: np.random.Generator) -> np.ndarray:
    """Flat Dirichlet via sorted-uniform gaps."""
    if k == 1:
        return np.array([1.0])
    cuts = np.sort(rng.uniform(size=k - 1))
    return np.diff(np.concatenate([[0.0], cuts, [1.0]]))


def _sort_points(points: list[OneShotPoint]) -> list[OneShotPoint]:
    return sorted(points, key=lambda p: tuple(np.round(p.triple, 12)))


# ---------------------------------------------------------------------------
# Structured qubit family: Schmidt-aligned states in the dephasing basis
# ---------------------------------------------------------------------------

def schmidt_state(mu: float) -> np.ndarray:
    """sqrt(mu)|00> + sqrt(1-mu)|11> on A (x) A' (both qubits)."""
    v = np.zeros(4)
    v[0] = np.sqrt(mu)
    v[3] = np.sqrt(1.0 - mu)
    return v


def structured_ensembles(grid: int) -> list[tuple[str, Ensemble]]:
    out = []
    for mu in np.linspace(0.0, 0.5, grid):
        mu = float(mu)
        out.append((f"struct:single:mu={mu:.6f}",
                    single_state_ensemble(schmidt_state(mu), 2, 2)))
        out.append((f"struct:pair:mu={mu:.6f}",
                    make_ensemble([(0.5, schmidt_state(mu)), (0.5, schmidt_state(1.0 - mu))],
                                  2, 2)))
    return out


def random_ensemble(channel: QuantumChannel, cfg: SweepConfig, index: int) -> Ensemble:
    rng = _rng(cfg.seed, index)
    m = 1 + index % cfg.max_outcomes
    d = channel.in_dim
    probs = simplex_weights(m, rng)
    entries = [(float(p), haar_state(d * d, rng)) for p in probs]
    return make_ensemble(entries, d, d)


def sweep_cef(channel: QuantumChannel, cfg: SweepConfig, *, k: int = 1) -> list[OneShotPoint]:
    """Sample the dynamic one-shot region of a channel.

    Always includes the maximally entangled single-state ensemble; qubit
    channels additionally get the structured Schmidt family when cfg.grid is
    set (it traces the dephasing boundary exactly).
    """
    if channel.in_dim > 4:
        raise InvariantError(f"channel input dim {channel.in_dim} over the sweep cap 4")
    d = channel.in_dim
    points = []
    bell = single_state_ensemble(np.eye(d).reshape(-1) / np.sqrt(d), d, d)
    points.append(cef_point(channel, bell, k=k, provenance="maximally-entangled"))
    if cfg.grid and d == 2 and channel.out_dim == 2:
        for tag, ens in structured_ensembles(cfg.grid):
            points.append(cef_point(channel, ens, k=k, provenance=tag))
        if cfg.refine_iters:
            mu = _refine_father_curve(channel, cfg.refine_iters)
            points.append(cef_point(channel, single_state_ensemble(schmidt_state(mu), 2, 2),
                                    k=k, provenance=f"struct:refined:mu={mu:.9f}"))
    for i in range(cfg.samples):
        ens = random_ensemble(channel, cfg, i)
        points.append(cef_point(channel, ens, k=k, provenance=f"rand:{i}"))
    return _sort_points(points)


def random_instrument(rho: DensityMatrix, cfg: SweepConfig, index: int) -> Instrument:
    rng = _rng(cfg.seed, index)
    d = rho.subsystem("A").dim
    total_kraus = 2 + index % 3                      # 2..4 Kraus operators overall
    m = 1 + index % min(cfg.max_outcomes, total_kraus)
    u = haar_unitary(d * total_kraus, rng)
    v = u[:, :d]                                     # Haar isometry d -> d * total_kraus
    kraus = [v[k * d:(k + 1) * d, :] for k in range(total_kraus)]
    branches: list[list[np.ndarray]] = [[] for _ in range(m)]
    for k, op in enumerate(kraus):
        branches[k % m].append(op)
    return Instrument([(str(x), ks) for x, ks in enumerate(branches)])


def sweep_casr(rho: DensityMatrix, cfg: SweepConfig, *, k: int = 1) -> list[OneShotPoint]:
    """Sample the static one-shot region of a bipartite state.

    The trivial (identity) instrument is always included.
    """
    from .quantum import trivial_instrument

    d = rho.subsystem("A").dim
    points = [casr_point(rho, trivial_instrument(d), k=k, provenance="trivial")]
    for i in range(cfg.samples):
        inst = random_instrument(rho, cfg, i)
        points.append(casr_point(rho, inst, k=k, provenance=f"rand:{i}"))
    return _sort_points(points)


# ---------------------------------------------------------------------------
# Coherent-information maximization (structured family + optional refinement)
# ---------------------------------------------------------------------------

def _coherent_info_of_mu(channel: QuantumChannel, mu: float) -> float:
    p = cef_point(channel, single_state_ensemble(schmidt_state(mu), 2, 2))
    return float(p.triple[1] + p.triple[2])         # Q + E = I(A>B) for one pure state


def _refine_father_curve(channel: QuantumChannel, iters: int) -> float:
    """Golden-section maximization of coherent information over the Schmidt weight."""
    lo, hi = 0.0, 1.0
    c = hi - GOLDEN * (hi - lo)
    d = lo + GOLDEN * (hi - lo)
    fc, fd = _coherent_info_of_mu(channel, c), _coherent_info_of_mu(channel, d)
    for _ in range(iters):
        if fc < fd:
            lo, c, fc = c, d, fd
            d = lo + GOLDEN * (hi - lo)
            fd = _coherent_info_of_mu(channel, d)
        else:
            hi, d, fd = d, c, fc
            c = hi - GOLDEN * (hi - lo)
            fc = _coherent_info_of_mu(channel, c)
    return (lo + hi) / 2.0


def max_coherent_information(channel: QuantumChannel, cfg: SweepConfig | None = None) -> float:
    """Best single-use coherent information found by the structured/random sweep."""
    cfg = cfg or SweepConfig(seed=7, samples=32, grid=101)
    points = sweep_cef(channel, cfg)
    # Q + E = I(A>BX) is an achievable zero-ebit quantum rate for every sigma
    return max(float(p.triple[1] + p.triple[2]) for p in points)


# ---------------------------------------------------------------------------
# Pareto frontier projections
# ---------------------------------------------------------------------------

@dataclass
class BoundaryCurve:
    """Ordered Pareto frontier of a 2-d projection of a rate region."""

    axes: tuple[str, str]
    vertices: np.ndarray                 # (n, 2), ascending in the first axis
    ray_low: np.ndarray | None = None    # frontier continuation at the low-u end
    ray_high: np.ndarray | None = None   # continuation at the high-u end

    def csv_lines(self):
        lines = [f"kind,{self.axes[0]},{self.axes[1]}"]
        if self.ray_low is not None:
            lines.append(f"ray_low,{float(self.ray_low[0])!r},{float(self.ray_low[1])!r}")
        for u, v in self.vertices:
            lines.append(f"vertex,{float(u)!r},{float(v)!r}")
        if self.ray_high is not None:
            lines.append(f"ray_high,{float(self.ray_high[0])!r},{float(self.ray_high[1])!r}")
        return lines


def _clip_chain(verts, ray_low, ray_high, axis: int, sign: str, tol: float = 1e-9):
    """Intersect a monotone frontier chain with the half-plane sign*x[axis] >= 0."""
    s = 1.0 if sign == "+" else -1.0

    def f(p):
        return s * p[axis]

    pieces = []
    if ray_low is not None:
        # parameterize inward: from infinity toward verts[0]
        pieces.append(("ray_in", verts[0], ray_low))
    for a, b in zip(verts[:-1], verts[1:]):
        pieces.append(("seg", a, b))
    if ray_high is not None:
        pieces.append(("ray_out", verts[-1], ray_high))

    out_verts, out_low, out_high = [], None, None

    def push(p):
        if not out_verts or np.max(np.abs(out_verts[-1] - p)) > tol:
            out_verts.append(np.asarray(p, dtype=float))

    for kind, a, b in pieces:
        if kind == "seg":
            fa, fb = f(a), f(b)
            if fa >= -tol and fb >= -tol:
                push(a)
                push(b)
            elif fa < -tol and fb < -tol:
                continue
            else:
                t = fa / (fa - fb)
                c = a + t * (b - a)
                if fa >= -tol:
                    push(a)
                    push(c)
                else:
                    push(c)
                    push(b)
        else:
            base, d = a, b
            fb_, fd = f(base), f(d)
            if fb_ >= -tol and fd >= -tol:
                push(base)
                if kind == "ray_in":
                    out_low = d
                else:
                    out_high = d
            elif fb_ >= -tol and fd < -tol:
                t = -fb_ / fd
                push(base + max(t, 0.0) * d)
                push(base)
            elif fb_ < -tol and fd > tol:
                t = -fb_ / fd
                push(base + t * d)
                if kind == "ray_in":
                    out_low = d
                else:
                    out_high = d
            # else: entirely infeasible, dropped
    if not out_verts:
        raise ValueError("frontier is empty inside the requested quadrant")
    out = [out_verts[0]]
    for v in out_verts[1:]:
        if np.max(np.abs(v - out[-1])) > tol:
            out.append(v)
    out.sort(key=lambda v: (v[0], -v[1]))
    return out, out_low, out_high


def boundary_curve(points, plane, *, drop=None, angle_steps: int = 1800) -> BoundaryCurve:
    """Project the assembled region onto a coordinate plane and walk its frontier.

    ``plane`` is a sign pattern; the dropped coordinate (by default the one
    marked free '*') is eliminated.  A '0' on the dropped coordinate slices
    instead of projecting, and a sign constrains it before elimination (a
    no-op when the region can waste that resource freely).  Signs on the two
    kept coordinates clip the reported polyline to that quadrant.  The
    frontier is the set of boundary points where neither kept coordinate can
    improve without hurting the other, ordered by the first kept axis, plus
    terminal ray directions where the region is unbounded.
    """
    spec = OrthantSpec.parse(plane)
    region = points if isinstance(points, RateRegion) else assemble_region(points)
    if drop is None:
        free = [i for i, s in enumerate(spec.signs) if s == "*"]
        if len(free) != 1:
            raise ValueError("plane spec must mark exactly one coordinate free "
                             "('*'), or pass drop= explicitly")
        drop = free[0]
    else:
        drop = ("C", "Q", "E").index(drop) if isinstance(drop, str) else int(drop)

    drop_sign = spec.signs[drop]
    if drop_sign in "+-0":
        needs_clip = True
        if drop_sign in "+-":
            # moving further into the half-space costs nothing if the matching
            # direction lies in the recession cone; then projection is unchanged
            into = np.zeros(3)
            into[drop] = 1.0 if drop_sign == "+" else -1.0
            from .geometry import contains as _contains
            if len(region.rays):
                cone = RateRegion([np.zeros(3)], region.rays)
                needs_clip = not _contains(cone, into)
        if needs_clip:
            from .geometry import clip
            clip_spec = ["*", "*", "*"]
            clip_spec[drop] = drop_sign
            region = clip(region, OrthantSpec(tuple(clip_spec)))

    keep = [i for i in range(3) if i != drop]
    axes = tuple(("C", "Q", "E")[i] for i in keep)
    pts2 = region.points[:, keep]
    rays2 = region.rays[:, keep] if len(region.rays) else np.zeros((0, 2))
    rays2 = rays2[np.linalg.norm(rays2, axis=1) > 1e-12]
    if len(rays2):
        rays2 = rays2 / np.linalg.norm(rays2, axis=1)[:, None]

    verts = []
    for phi in np.linspace(1e-6, np.pi / 2 - 1e-6, angle_steps):
        w = np.array([np.cos(phi), np.sin(phi)])
        if len(rays2) and np.max(rays2 @ w) > 1e-9:
            continue
        scores = pts2 @ w
        best = np.flatnonzero(scores >= scores.max() - 1e-12)
        pick = best[np.lexsort(pts2[best].T[::-1])][-1]
        verts.append(pts2[pick])
    uniq = []
    for v in verts:
        if not any(np.max(np.abs(v - u)) <= 1e-9 for u in uniq):
            uniq.append(v)
    uniq.sort(key=lambda v: (v[0], -v[1]))

    ray_low = ray_high = None
    rising = [r for r in rays2 if r[1] > 1e-9]       # continues toward larger v
    if rising:
        ray_low = np.asarray(min(rising, key=lambda r: (r[0], -r[1])))
    falling = [r for r in rays2 if r[0] > 1e-9]      # continues toward larger u
    if falling:
        ray_high = np.asarray(max(falling, key=lambda r: (r[0], -r[1])))
    if not uniq:
        # every sampled weight was unbounded: the frontier is a single line,
        # supported only by the boundary weight of the recession cone
        w = None
        for r in rays2:
            for cand in (np.array([-r[1], r[0]]), np.array([r[1], -r[0]])):
                if cand[0] >= -1e-12 and cand[1] >= -1e-12 \
                        and np.max(rays2 @ cand) <= 1e-9:
                    w = cand
                    break
            if w is not None:
                break
        if w is None:
            w = np.array([1.0, 1.0])
        scores = pts2 @ w
        uniq = [pts2[int(np.argmax(scores))]]

    for ax2, sign in enumerate(spec.signs[k] for k in keep):
        if sign in "+-":
            uniq, ray_low, ray_high = _clip_chain(uniq, ray_low, ray_high, ax2, sign)
        elif sign == "0":
            raise ValueError("kept plane coordinates cannot be pinned to 0; "
                             "use clip() for slices")
    return BoundaryCurve(axes=axes, vertices=np.asarray(uniq),
                         ray_low=None if ray_low is None else np.asarray(ray_low),
                         ray_high=None if ray_high is None else np.asarray(ray_high))
