"""Shared test helpers: independent oracles kept deliberately separate from the package.

The oracles recompute the same quantities through different code paths
(index-loop partial traces, scipy eigenvalues, closed forms via math.log2) so
the package implementation is never checked against itself.
"""

import itertools
import math

import numpy as np
import scipy.linalg

from tripletrade.quantum import DensityMatrix, Subsystem


def oracle_h2(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def oracle_entropy_bits(matrix) -> float:
    """Entropy through scipy's eigenvalue path instead of numpy's."""
    w = scipy.linalg.eigvalsh(np.asarray(matrix))
    return float(-sum(v * math.log2(v) for v in w if v > 1e-14))


def oracle_partial_trace(matrix, dims, keep):
    """Brute-force partial trace by explicit basis-index loops."""
    dims = tuple(dims)
    keep = tuple(keep)
    traced = tuple(i for i in range(len(dims)) if i not in keep)
    dk = int(np.prod([dims[i] for i in keep])) if keep else 1
    out = np.zeros((dk, dk), dtype=complex)
    matrix = np.asarray(matrix)

    def flat(idx):
        f = 0
        for i, d in enumerate(dims):
            f = f * d + idx[i]
        return f

    keep_ranges = [range(dims[i]) for i in keep]
    trace_ranges = [range(dims[i]) for i in traced]
    for row_k in itertools.product(*keep_ranges):
        for col_k in itertools.product(*keep_ranges):
            acc = 0.0 + 0.0j
            for t in itertools.product(*trace_ranges):
                row = [0] * len(dims)
                col = [0] * len(dims)
                for pos, i in enumerate(keep):
                    row[i] = row_k[pos]
                    col[i] = col_k[pos]
                for pos, i in enumerate(traced):
                    row[i] = t[pos]
                    col[i] = t[pos]
                acc += matrix[flat(row), flat(col)]
            r = 0
            for v, i in zip(row_k, keep):
                r = r * dims[i] + v
            cc = 0
            for v, i in zip(col_k, keep):
                cc = cc * dims[i] + v
            out[r, cc] = acc
    return out


def random_density(rng, dims, labels=None, rank=None):
    """Seeded random full(ish)-rank density matrix with labeled subsystems."""
    d = int(np.prod(dims))
    r = rank or d
    g = rng.standard_normal((d, r)) + 1j * rng.standard_normal((d, r))
    m = g @ g.conj().T
    m /= np.trace(m).real
    labels = labels or [f"S{i}" for i in range(len(dims))]
    return DensityMatrix([Subsystem(n, dd) for n, dd in zip(labels, dims)], m)


def random_pure_vector(rng, dim):
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)
