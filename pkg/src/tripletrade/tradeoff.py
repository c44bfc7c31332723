"""One-shot rate points, achievable-region assembly, and converse-bound predicates.

The dynamic one-shot point (classically enhanced, entanglement-consuming
channel coding) and the static one-shot point (classically assisted
redistribution of a shared state) are both entropic functions of a flagged
extension state sigma; the converse predicates here take that sigma explicitly
so bound evaluation stays deterministic and unit-testable.  Maximization over
ensembles/instruments lives in the optimizer module.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .entropy import coherent_information, conditional_mutual_information, mutual_information
from .geometry import RateRegion, as_triple, extremum, minkowski_sum
from .quantum import DensityMatrix, Instrument, InvariantError, QuantumChannel, tensor_channel
from .sigma import Ensemble, build_sigma_dynamic, build_sigma_static
from .units import BoundCheck, Verdict, unit_coefficients, unit_region

SIGN_TOL = 1e-9


@dataclass
class OneShotPoint:
    """A single achievable (C, Q, E) triple, rates already divided by k."""

    kind: str                    # "CEF" (dynamic) | "CASR" (static)
    triple: np.ndarray
    provenance: str = ""
    k: int = 1
    sigma: DensityMatrix | None = field(default=None, repr=False)

    def __post_init__(self):
        self.triple = as_triple(self.triple)
        c, q, e = self.triple
        if self.kind == "CEF":
            if c < -SIGN_TOL or q < -SIGN_TOL or e > SIGN_TOL:
                raise InvariantError(f"CEF point {self.triple} outside octant (+,+,-)")
        elif self.kind == "CASR":
            if c > SIGN_TOL or q > SIGN_TOL:
                raise InvariantError(f"CASR point {self.triple} has positive C or Q")
        else:
            raise InvariantError(f"unknown one-shot kind {self.kind!r}")

    def csv_row(self) -> str:
        c, q, e = (float(v) for v in self.triple)
        return f"{self.kind},{self.k},{c!r},{q!r},{e!r},{self.provenance}"


def cef_point(channel: QuantumChannel, ens: Ensemble, *, k: int = 1,
              provenance: str = "") -> OneShotPoint:
    """Dynamic one-shot triple (I(X;B), I(A;B|X)/2, -I(A;E|X)/2) of sigma^{XABE}."""
    sigma = build_sigma_dynamic(channel, ens)
    c = mutual_information(sigma, "X", "B")
    q = 0.5 * conditional_mutual_information(sigma, "A", "B", "X")
    e = -0.5 * conditional_mutual_information(sigma, "A", "E", "X")
    return OneShotPoint("CEF", np.array([c, q, e]) / k, provenance=provenance,
                        k=k, sigma=sigma)


def casr_point(rho: DensityMatrix, instrument: Instrument, *, k: int = 1,
               provenance: str = "") -> OneShotPoint:
    """Static one-shot triple of sigma^{XA'BEE'}:

    (-I(X;E|B), -I(A';E|E'X)/2, (I(A';B|X) - I(A';E'|X))/2).
    """
    sigma = build_sigma_static(rho, instrument)
    c = -conditional_mutual_information(sigma, "X", "E", "B")
    q = -0.5 * conditional_mutual_information(sigma, "A'", "E", ("E'", "X"))
    e = 0.5 * (conditional_mutual_information(sigma, "A'", "B", "X")
               - conditional_mutual_information(sigma, "A'", "E'", "X"))
    return OneShotPoint("CASR", np.array([c, q, e]) / k, provenance=provenance,
                        k=k, sigma=sigma)


def assemble_region(points) -> RateRegion:
    """Achievable region: one-shot points (plus origin), set-added with the unit cone."""
    triples = [np.zeros(3)]
    for p in points:
        triples.append(p.triple if isinstance(p, OneShotPoint) else as_triple(p))
    triples = _prune_dominated(np.asarray(triples))
    return minkowski_sum(RateRegion(triples), unit_region())


def _prune_dominated(triples: np.ndarray) -> np.ndarray:
    """Drop points reachable from another generator through the unit cone alone.

    p is dominated by q when p - q decomposes into nonnegative TP/SD/ED weights
    (the inverse-matrix rows of the unit cone); duplicates keep their first
    occurrence in canonical lexicographic order.
    """
    order = np.lexsort(triples.T[::-1])
    triples = triples[order]
    c, q, e = triples[:, 0], triples[:, 1], triples[:, 2]
    s = c + q + e
    qe = q + e
    c2q = c + 2.0 * q
    tol = 1e-12
    alpha = -(s[:, None] - s[None, :]) / 2.0
    beta = -(qe[:, None] - qe[None, :]) / 2.0
    gamma = -(c2q[:, None] - c2q[None, :]) / 2.0
    feas = (alpha >= -tol) & (beta >= -tol) & (gamma >= -tol)
    # near-duplicates use a looser threshold than feasibility so that two
    # points within roundoff of each other cannot strictly dominate each other
    dup_tol = 1e-9
    dup = (np.abs(c[:, None] - c[None, :]) <= dup_tol) \
        & (np.abs(q[:, None] - q[None, :]) <= dup_tol) \
        & (np.abs(e[:, None] - e[None, :]) <= dup_tol)
    strict = feas & ~dup
    np.fill_diagonal(strict, False)
    dominated = strict.any(axis=1) | np.tril(dup, -1).any(axis=1)
    kept = triples[~dominated]
    return kept if len(kept) else triples[:1]


def tensor_copies(resource, k: int):
    """k-fold tensor power of a channel or bipartite state, k in {1, 2}."""
    if k not in (1, 2):
        raise InvariantError("only k in {1, 2} is supported")
    if k == 1:
        return resource
    if isinstance(resource, QuantumChannel):
        return tensor_channel(resource, resource)
    if isinstance(resource, DensityMatrix):
        from .quantum import fuse, tensor

        if set(resource.names) != {"A", "B"}:
            raise InvariantError(f"expected labels A, B; got {resource.names}")
        second = DensityMatrix([(n + "2", resource.subsystem(n).dim) for n in resource.names],
                               resource.matrix, validate=False)
        first = DensityMatrix([(n + "1", resource.subsystem(n).dim) for n in resource.names],
                              resource.matrix, validate=False)
        joint = tensor(first, second)
        return fuse(joint, {"A": ["A1", "A2"], "B": ["B1", "B2"]})
    raise InvariantError(f"cannot tensor object of type {type(resource).__name__}")


# ---------------------------------------------------------------------------
# Converse-bound predicates (exact form: epsilon = delta = 0)
# ---------------------------------------------------------------------------

def _dynamic_quantities(sigma: DensityMatrix):
    return {
        "I(AX;B)": mutual_information(sigma, ("A", "X"), "B"),
        "I(X;B)": mutual_information(sigma, "X", "B"),
        "I(A>BX)": coherent_information(sigma, "A", ("B", "X")),
    }


def cef_octant_bounds(sigma: DensityMatrix, x, tol: float = 1e-9) -> Verdict:
    """Octant (+,+,-): entanglement-assisted transmission of classical + quantum data."""
    c, q, e = as_triple(x)
    ea = max(0.0, -e)
    v = _dynamic_quantities(sigma)
    checks = [
        BoundCheck("C + 2Q <= I(AX;B)", c + 2 * q, v["I(AX;B)"]),
        BoundCheck("Q <= I(A>BX) + |E|", q, v["I(A>BX)"] + ea),
        BoundCheck("C + Q <= I(X;B) + I(A>BX) + |E|", c + q,
                   v["I(X;B)"] + v["I(A>BX)"] + ea),
    ]
    return Verdict("cef_octant_bounds (+,+,-)", checks, tol)


def caq_bounds(sigma: DensityMatrix, x, tol: float = 1e-9) -> Verdict:
    """Octant (-,+,-): classical- and entanglement-assisted quantum communication."""
    c, q, e = as_triple(x)
    ca, ea = max(0.0, -c), max(0.0, -e)
    v = _dynamic_quantities(sigma)
    checks = [
        BoundCheck("Q <= I(A>BX) + |E|", q, v["I(A>BX)"] + ea),
        BoundCheck("2Q <= I(AX;B) + |C|", 2 * q, v["I(AX;B)"] + ca),
    ]
    return Verdict("caq_bounds (-,+,-)", checks, tol)


def eaq_classical_bounds(sigma: DensityMatrix, x, tol: float = 1e-9) -> Verdict:
    """Octant (+,-,-): classical communication over an assisted quantum channel."""
    c, q, e = as_triple(x)
    qa, ea = max(0.0, -q), max(0.0, -e)
    v = _dynamic_quantities(sigma)
    checks = [
        BoundCheck("C <= I(AX;B) + 2|Q|", c, v["I(AX;B)"] + 2 * qa),
        BoundCheck("C <= I(X;B) + I(A>BX) + |Q| + |E|", c,
                   v["I(X;B)"] + v["I(A>BX)"] + qa + ea),
    ]
    return Verdict("eaq_classical_bounds (+,-,-)", checks, tol)


def casr_octant_bounds(sigma: DensityMatrix, x, tol: float = 1e-9) -> Verdict:
    """Octant (-,-,+): entanglement generation from a shared state plus communication.

    The A' system here is the instrument output (the post-measurement quantum
    side information kept by the sender).
    """
    c, q, e = as_triple(x)
    ca, qa = max(0.0, -c), max(0.0, -q)
    coh = coherent_information(sigma, "A'", ("B", "X"))
    ixe_b = conditional_mutual_information(sigma, "X", "E", "B")
    iae = conditional_mutual_information(sigma, "A'", "E", ("E'", "X"))
    checks = [
        BoundCheck("E <= I(A'>BX) + |Q|", e, coh + qa),
        BoundCheck("I(X;E|B) + I(A';E|E'X) <= |C| + 2|Q|", ixe_b + iae, ca + 2 * qa),
        BoundCheck("E <= |C| + |Q| + I(A'>BX) - I(X;E|B)", e, ca + qa + coh - ixe_b),
    ]
    return Verdict("casr_octant_bounds (-,-,+)", checks, tol)


BOUND_PREDICATES = {
    "++-": cef_octant_bounds,
    "-+-": caq_bounds,
    "+--": eaq_classical_bounds,
    "--+": casr_octant_bounds,
}


# ---------------------------------------------------------------------------
# Entanglement-assisted coding versus teleportation
# ---------------------------------------------------------------------------

@dataclass
class GapResult:
    """Ebit-consumption gap between pure teleportation and channel coding."""

    gap: float
    quantum_rate: float
    coding_ebits: float
    teleport_ebits: float
    capacity_estimate: float


def ea_vs_tp_gap(points, *, quantum_rate: float | None = None) -> GapResult:
    """Compare ebit cost of coding vs teleportation at a matched quantum rate.

    Projects the dynamic achievable region onto the quadrant where classical
    communication is free and measures how many fewer ebits the coding strategy
    consumes; this difference equals the channel's quantum capacity.

    ``points`` are dynamic one-shot points (the sweep output for the channel).
    """
    region = assemble_region(points)
    cap = max((float(p.triple[1] + p.triple[2]) for p in points), default=0.0)
    cap = max(cap, 0.0)
    q_star = quantum_rate if quantum_rate is not None else max(1.0, cap + 0.5)
    if q_star < cap - 1e-12:
        raise ValueError(f"quantum rate {q_star} below capacity estimate {cap}; "
                         "the teleportation comparison needs a matched rate beyond it")
    # classical communication is free: only Q is pinned, C is left unconstrained
    e_best, _ = extremum(region, [0.0, 0.0, 1.0], fixed={"Q": q_star}, sense="max")
    tp_region = RateRegion([np.zeros(3)], [[-2.0, 1.0, -1.0]])
    e_tp, _ = extremum(tp_region, [0.0, 0.0, 1.0], fixed={"Q": q_star}, sense="max")
    coding = -e_best
    teleport = -e_tp
    return GapResult(gap=teleport - coding, quantum_rate=q_star,
                     coding_ebits=coding, teleport_ebits=teleport,
                     capacity_estimate=cap)
