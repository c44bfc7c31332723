"""Entropic functionals on labeled multipartite states, in bits (base-2 logs)."""

from __future__ import annotations

import numpy as np

from .quantum import DensityMatrix, InvariantError, clipped_eigvalsh, partial_trace

LOG2 = np.log(2.0)


def binary_entropy(p: float) -> float:
    """H2(p) = -p log2 p - (1-p) log2 (1-p), with H2(0) = H2(1) = 0."""
    if p < -1e-12 or p > 1 + 1e-12:
        raise ValueError(f"binary_entropy argument {p} outside [0, 1]")
    p = min(max(p, 0.0), 1.0)
    out = 0.0
    if p > 0.0:
        out -= p * np.log2(p)
    if p < 1.0:
        out -= (1.0 - p) * np.log2(1.0 - p)
    return float(out)


def _group(names) -> tuple[str, ...]:
    if names is None:
        return ()
    if isinstance(names, str):
        return (names,)
    return tuple(names)


def _reduced(rho: DensityMatrix, group: tuple[str, ...]) -> np.ndarray:
    if not group:
        return np.array([[1.0 + 0j]])
    return partial_trace(rho, group).matrix


def _check_disjoint(*groups):
    seen = set()
    for g in groups:
        overlap = seen & set(g)
        if overlap:
            raise InvariantError(f"groups overlap on {sorted(overlap)}")
        seen |= set(g)


def von_neumann(rho: DensityMatrix, group) -> float:
    """Von Neumann entropy of the reduced state on ``group``, in bits."""
    w = clipped_eigvalsh(_reduced(rho, _group(group)))
    w = w[w > 0.0]
    return float(-(w * np.log2(w)).sum()) if w.size else 0.0


def mutual_information(rho: DensityMatrix, group_a, group_b) -> float:
    """I(A;B) = H(A) + H(B) - H(AB)."""
    a, b = _group(group_a), _group(group_b)
    _check_disjoint(a, b)
    return von_neumann(rho, a) + von_neumann(rho, b) - von_neumann(rho, a + b)


def conditional_mutual_information(rho: DensityMatrix, group_a, group_b, group_c) -> float:
    """I(A;B|C) = H(AC) + H(BC) - H(ABC) - H(C)."""
    a, b, c = _group(group_a), _group(group_b), _group(group_c)
    _check_disjoint(a, b, c)
    return (von_neumann(rho, a + c) + von_neumann(rho, b + c)
            - von_neumann(rho, a + b + c) - von_neumann(rho, c))


def coherent_information(rho: DensityMatrix, group_a, group_b) -> float:
    """I(A>B) = H(B) - H(AB); pass group_b = (B, X) for the conditional variant I(A>BX)."""
    a, b = _group(group_a), _group(group_b)
    _check_disjoint(a, b)
    return von_neumann(rho, b) - von_neumann(rho, a + b)
