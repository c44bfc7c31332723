"""Self-contained dense two-phase simplex (Bland's rule) for small LPs.

Solves   min c.x   s.t.  A x = b,  x >= 0.

Problem sizes in this package stay tiny (tens of variables, <= ~6 rows), so a
dense tableau with from-scratch reduced costs each iteration is plenty fast and
keeps the package free of external solver dependencies.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

PIVOT_TOL = 1e-9
DEFAULT_MAXITER = 20000


@dataclass
class LPResult:
    status: str            # "optimal" | "infeasible" | "unbounded"
    x: np.ndarray
    objective: float
    residual: float        # phase-1 objective: total artificial mass left


def _iterate(T: np.ndarray, basis: np.ndarray, cost: np.ndarray, maxiter: int) -> str:
    m, n1 = T.shape
    n = n1 - 1
    for _ in range(maxiter):
        red = cost[:n] - cost[basis] @ T[:, :n]
        candidates = np.flatnonzero(red < -PIVOT_TOL)
        if candidates.size == 0:
            return "optimal"
        enter = int(candidates[0])  # Bland: smallest eligible index
        col = T[:, enter]
        rows = np.flatnonzero(col > PIVOT_TOL)
        if rows.size == 0:
            return "unbounded"
        ratios = T[rows, n] / col[rows]
        best = ratios.min()
        tied = rows[ratios <= best + 1e-12]
        leave = int(tied[np.argmin(basis[tied])])  # Bland tie-break
        T[leave] /= T[leave, enter]
        for i in range(m):
            if i != leave and T[i, enter] != 0.0:
                T[i] -= T[i, enter] * T[leave]
        basis[leave] = enter
    raise RuntimeError("simplex iteration limit reached")


def simplex_solve(c, A, b, *, maxiter: int = DEFAULT_MAXITER) -> LPResult:
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float).reshape(-1)
    m, n = A.shape
    c = np.zeros(n) if c is None else np.asarray(c, dtype=float).reshape(-1)

    flip = b < 0
    A = np.where(flip[:, None], -A, A)
    b = np.where(flip, -b, b)

    # Phase 1: artificial basis, minimize total artificial mass.
    T = np.hstack([A, np.eye(m), b[:, None]])
    basis = np.arange(n, n + m)
    cost1 = np.concatenate([np.zeros(n), np.ones(m)])
    _iterate(T, basis, cost1, maxiter)
    residual = float(cost1[basis] @ T[:, -1])

    def extract():
        x = np.zeros(n)
        in_range = basis < n
        x[basis[in_range]] = T[np.flatnonzero(in_range), -1]
        return x

    if residual > 1e-7:
        return LPResult("infeasible", extract(), float("nan"), residual)

    # Drive leftover artificials out of the basis; drop redundant rows.
    keep = np.ones(len(basis), dtype=bool)
    for r in range(len(basis)):
        if basis[r] >= n:
            pivots = np.flatnonzero(np.abs(T[r, :n]) > PIVOT_TOL)
            if pivots.size:
                enter = int(pivots[0])
                T[r] /= T[r, enter]
                for i in range(T.shape[0]):
                    if i != r and T[i, enter] != 0.0:
                        T[i] -= T[i, enter] * T[r]
                basis[r] = enter
            else:
                keep[r] = False
    T = np.hstack([T[keep][:, :n], T[keep][:, -1:]])
    basis = basis[keep]

    if np.any(c):
        status = _iterate(T, basis, c, maxiter)
        if status == "unbounded":
            return LPResult("unbounded", extract(), float("-inf"), residual)
    x = extract()
    return LPResult("optimal", x, float(c @ x), residual)


def nonneg_combination(columns: np.ndarray, target: np.ndarray, *,
                       convex_prefix: int = 0, tol: float = 1e-8):
    """Find w >= 0 with ``columns @ w = target`` within an L1 slack of ``tol``.

    The first ``convex_prefix`` weights are additionally constrained to sum to 1.
    Returns (found, w, residual); the residual is the optimal L1 mismatch.
    """
    columns = np.asarray(columns, dtype=float)
    target = np.asarray(target, dtype=float).reshape(-1)
    d, n = columns.shape
    A = np.hstack([columns, np.eye(d), -np.eye(d)])
    b = target.copy()
    if convex_prefix:
        row = np.zeros((1, A.shape[1]))
        row[0, :convex_prefix] = 1.0
        A = np.vstack([A, row])
        b = np.concatenate([b, [1.0]])
    c = np.concatenate([np.zeros(n), np.ones(2 * d)])
    res = simplex_solve(c, A, b)
    if res.status != "optimal":
        return False, np.zeros(n), float("inf")
    return bool(res.objective <= tol), res.x[:n], float(res.objective)
