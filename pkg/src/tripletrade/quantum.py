"""Finite-dimensional quantum states, channels, and instruments on labeled subsystems.

Every state carries an ordered list of named subsystems, so downstream entropic
formulas can address marginals by name (e.g. ``("A", "B")``) instead of index
arithmetic.  All objects are immutable after construction and all operations are
pure functions, so everything here is safe to use from concurrent workers.
"""

from __future__ import annotations

from dataclasses import dataclass
import itertools

import numpy as np

# Shared numerical tolerances.  Eigenvalues in [-EIG_CLIP, 0) are treated as
# roundoff and clipped to zero; anything more negative is a hard error.
HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
EIG_CLIP = 1e-10
COMPLETENESS_TOL = 1e-10
PURE_NORM_TOL = 1e-12
DIM_CAP = 1024


class InvariantError(ValueError):
    """A state, channel, or instrument violated one of its numerical invariants."""


@dataclass(frozen=True)
class Subsystem:
    """A named tensor factor with its Hilbert-space dimension."""

    name: str
    dim: int

    def __post_init__(self):
        if not self.name:
            raise InvariantError("subsystem name must be nonempty")
        if self.dim < 1:
            raise InvariantError(f"subsystem {self.name!r} has dim {self.dim} < 1")


def _as_subsystems(labels) -> tuple[Subsystem, ...]:
    out = []
    for lab in labels:
        if isinstance(lab, Subsystem):
            out.append(lab)
        else:
            name, dim = lab
            out.append(Subsystem(str(name), int(dim)))
    names = [s.name for s in out]
    if len(set(names)) != len(names):
        raise InvariantError(f"duplicate subsystem names in {names}")
    return tuple(out)


def _check_dim_cap(total: int):
    if total > DIM_CAP:
        raise InvariantError(f"total dimension {total} exceeds cap {DIM_CAP}")


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


class DensityMatrix:
    """Hermitian, PSD, unit-trace matrix over an ordered set of labeled subsystems."""

    def __init__(self, labels, matrix, *, validate: bool = True):
        self.labels = _as_subsystems(labels)
        total = int(np.prod([s.dim for s in self.labels], dtype=np.int64))
        _check_dim_cap(total)
        m = np.asarray(matrix, dtype=complex)
        if m.shape != (total, total):
            raise InvariantError(
                f"matrix shape {m.shape} does not match subsystem dims (total {total})"
            )
        if validate:
            if np.max(np.abs(m - m.conj().T), initial=0.0) > HERMITICITY_TOL:
                raise InvariantError("matrix is not Hermitian within 1e-10")
            if abs(m.trace().real - 1.0) > TRACE_TOL or abs(m.trace().imag) > TRACE_TOL:
                raise InvariantError(f"trace {m.trace()} != 1 within 1e-10")
            lo = float(np.min(np.linalg.eigvalsh((m + m.conj().T) / 2.0)))
            if lo < -EIG_CLIP:
                raise InvariantError(f"matrix has eigenvalue {lo} < -1e-10")
        self.matrix = _freeze(m)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.labels)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(s.dim for s in self.labels)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def index(self, name: str) -> int:
        for i, s in enumerate(self.labels):
            if s.name == name:
                return i
        raise KeyError(f"unknown subsystem {name!r}; have {self.names}")

    def subsystem(self, name: str) -> Subsystem:
        return self.labels[self.index(name)]

    def __repr__(self):
        sub = ",".join(f"{s.name}:{s.dim}" for s in self.labels)
        return f"DensityMatrix({sub})"


class PureState:
    """Unit vector over labeled subsystems."""

    def __init__(self, labels, vector):
        self.labels = _as_subsystems(labels)
        total = int(np.prod([s.dim for s in self.labels], dtype=np.int64))
        _check_dim_cap(total)
        v = np.asarray(vector, dtype=complex).reshape(-1)
        if v.shape != (total,):
            raise InvariantError(f"vector length {v.shape[0]} != total dim {total}")
        if abs(np.linalg.norm(v) - 1.0) > PURE_NORM_TOL:
            raise InvariantError(f"vector norm {np.linalg.norm(v)} != 1 within 1e-12")
        self.vector = _freeze(v)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.labels)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(s.dim for s in self.labels)

    def index(self, name: str) -> int:
        for i, s in enumerate(self.labels):
            if s.name == name:
                return i
        raise KeyError(f"unknown subsystem {name!r}; have {self.names}")

    def to_density(self) -> DensityMatrix:
        return DensityMatrix(self.labels, np.outer(self.vector, self.vector.conj()),
                             validate=False)

    def __repr__(self):
        sub = ",".join(f"{s.name}:{s.dim}" for s in self.labels)
        return f"PureState({sub})"


# ---------------------------------------------------------------------------
# Structural maps on states
# ---------------------------------------------------------------------------

def tensor(a: DensityMatrix, b: DensityMatrix) -> DensityMatrix:
    """Kronecker product of two states; label lists are concatenated."""
    clash = set(a.names) & set(b.names)
    if clash:
        raise InvariantError(f"duplicate subsystem names across factors: {sorted(clash)}")
    return DensityMatrix(a.labels + b.labels, np.kron(a.matrix, b.matrix), validate=False)


def tensor_pure(a: PureState, b: PureState) -> PureState:
    clash = set(a.names) & set(b.names)
    if clash:
        raise InvariantError(f"duplicate subsystem names across factors: {sorted(clash)}")
    return PureState(a.labels + b.labels, np.kron(a.vector, b.vector))


def partial_trace(rho: DensityMatrix, keep) -> DensityMatrix:
    """Trace out every subsystem not named in ``keep`` (order of kept labels preserved)."""
    if isinstance(keep, str):
        keep = (keep,)
    keep = tuple(keep)
    for name in keep:
        rho.index(name)  # raises on unknown label
    keep_set = set(keep)
    labels = rho.labels
    dims = rho.dims
    n = len(labels)
    t = rho.matrix.reshape(dims + dims)
    m = n
    for i in reversed(range(n)):
        if labels[i].name not in keep_set:
            t = np.trace(t, axis1=i, axis2=i + m)
            m -= 1
    kept = tuple(s for s in labels if s.name in keep_set)
    d = int(np.prod([s.dim for s in kept], dtype=np.int64)) if kept else 1
    return DensityMatrix(kept if kept else (Subsystem("_1", 1),),
                         t.reshape(d, d), validate=False)


def reorder(state, order):
    """Permute subsystems into the order given by ``order`` (a sequence of names)."""
    order = tuple(order)
    if sorted(order) != sorted(state.names):
        raise InvariantError(f"order {order} is not a permutation of {state.names}")
    perm = [state.index(name) for name in order]
    dims = state.dims
    new_labels = tuple(state.labels[i] for i in perm)
    if isinstance(state, PureState):
        t = state.vector.reshape(dims).transpose(perm)
        return PureState(new_labels, t.reshape(-1))
    n = len(dims)
    t = state.matrix.reshape(dims + dims).transpose(perm + [p + n for p in perm])
    d = state.matrix.shape[0]
    return DensityMatrix(new_labels, t.reshape(d, d), validate=False)


def fuse(state, groups):
    """Merge adjacent-in-``groups`` subsystems into single labels.

    ``groups`` is an ordered mapping ``new_name -> [old names]``; the state is
    first reordered to the concatenation of all groups.
    """
    flat = [name for members in groups.values() for name in members]
    state = reorder(state, flat)
    new_labels = []
    for new_name, members in groups.items():
        d = int(np.prod([state.labels[state.index(m)].dim for m in members], dtype=np.int64))
        new_labels.append(Subsystem(new_name, d))
    if isinstance(state, PureState):
        return PureState(new_labels, state.vector)
    return DensityMatrix(new_labels, state.matrix, validate=False)


def clipped_eigvalsh(matrix: np.ndarray) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix with roundoff negatives clipped to zero."""
    w = np.linalg.eigvalsh((matrix + matrix.conj().T) / 2.0)
    lo = float(w.min(initial=0.0))
    if lo < -EIG_CLIP:
        raise InvariantError(f"eigenvalue {lo} < -1e-10: not a valid state")
    return np.clip(w, 0.0, None)


def _canonical_eigensystem(m: np.ndarray):
    """Eigen-decomposition with descending eigenvalues, phase fixed and ties sorted.

    Phase convention: first component of magnitude > 1e-12 is made real positive.
    Near-degenerate eigenvalues (within 1e-12) are ordered lexicographically by
    the rounded component sequence of their phase-fixed eigenvectors, so the
    purification built on top of this is reproducible run to run.
    """
    w, v = np.linalg.eigh((m + m.conj().T) / 2.0)
    order = np.argsort(-w, kind="stable")
    w, v = w[order], v[:, order]
    for j in range(v.shape[1]):
        col = v[:, j]
        nz = np.flatnonzero(np.abs(col) > 1e-12)
        if nz.size:
            ph = col[nz[0]] / abs(col[nz[0]])
            v[:, j] = col / ph
    # lexicographic tie-break within (numerically) equal eigenvalues
    i = 0
    n = len(w)
    while i < n:
        j = i + 1
        while j < n and abs(w[j] - w[i]) <= 1e-12:
            j += 1
        if j - i > 1:
            keys = [tuple(np.round(np.column_stack([v[:, k].real, v[:, k].imag]), 10).ravel())
                    for k in range(i, j)]
            sub = sorted(range(i, j), key=lambda k: keys[k - i])
            v[:, i:j] = v[:, sub]
        i = j
    return w, v


def purify(rho: DensityMatrix, env_name: str = "E",
           env_dim: int | None = None) -> PureState:
    """Canonical eigendecomposition purification with the environment appended last.

    By default the environment dimension equals the matrix size of ``rho``;
    any ``env_dim`` down to the numerical rank is allowed (the dropped
    directions carry zero weight).  The eigenbasis convention in
    :func:`_canonical_eigensystem` makes the output deterministic.
    """
    if env_name in rho.names:
        raise InvariantError(f"environment name {env_name!r} already used")
    w, v = _canonical_eigensystem(rho.matrix)
    lo = float(w.min(initial=0.0))
    if lo < -EIG_CLIP:
        raise InvariantError(f"eigenvalue {lo} < -1e-10: not a valid state")
    w = np.clip(w, 0.0, None)
    d = rho.dim
    if env_dim is None:
        env_dim = d
    rank = int(np.sum(w > 1e-12))
    if not rank <= env_dim <= d:
        raise InvariantError(f"env_dim {env_dim} outside [rank {rank}, size {d}]")
    vec = (v[:, :env_dim] * np.sqrt(w[:env_dim])[None, :]).reshape(-1)
    vec = vec / np.linalg.norm(vec)
    return PureState(rho.labels + (Subsystem(env_name, env_dim),), vec)


# ---------------------------------------------------------------------------
# Channels, isometries, instruments
# ---------------------------------------------------------------------------

class QuantumChannel:
    """CPTP map given by a nonempty list of out_dim x in_dim Kraus operators."""

    def __init__(self, kraus, *, in_dim: int | None = None, out_dim: int | None = None):
        ks = [np.asarray(k, dtype=complex) for k in kraus]
        if not ks:
            raise InvariantError("channel needs at least one Kraus operator")
        out_d, in_d = ks[0].shape
        in_dim = in_dim or in_d
        out_dim = out_dim or out_d
        for k in ks:
            if k.shape != (out_dim, in_dim):
                raise InvariantError(f"Kraus shape {k.shape} != ({out_dim},{in_dim})")
        total = sum(k.conj().T @ k for k in ks)
        if np.max(np.abs(total - np.eye(in_dim))) > COMPLETENESS_TOL:
            raise InvariantError("Kraus operators are not trace preserving within 1e-10")
        self.in_dim = in_dim
        self.out_dim = out_dim
        self.kraus = tuple(_freeze(k) for k in ks)

    def __repr__(self):
        return f"QuantumChannel(in={self.in_dim}, out={self.out_dim}, kraus={len(self.kraus)})"


def identity_channel(dim: int = 2) -> QuantumChannel:
    return QuantumChannel([np.eye(dim)])


def tensor_channel(a: QuantumChannel, b: QuantumChannel) -> QuantumChannel:
    kraus = [np.kron(ka, kb) for ka, kb in itertools.product(a.kraus, b.kraus)]
    return QuantumChannel(kraus)


def apply_channel(channel: QuantumChannel, rho: DensityMatrix, on: str) -> DensityMatrix:
    """Apply the channel to the named factor; its dimension becomes out_dim."""
    i = rho.index(on)
    if rho.labels[i].dim != channel.in_dim:
        raise InvariantError(
            f"subsystem {on!r} has dim {rho.labels[i].dim}, channel expects {channel.in_dim}"
        )
    dl = int(np.prod(rho.dims[:i], dtype=np.int64)) if i else 1
    dr = int(np.prod(rho.dims[i + 1:], dtype=np.int64)) if i + 1 < len(rho.dims) else 1
    il, ir = np.eye(dl), np.eye(dr)
    out = np.zeros((dl * channel.out_dim * dr,) * 2, dtype=complex)
    for k in channel.kraus:
        kf = np.kron(np.kron(il, k), ir)
        out += kf @ rho.matrix @ kf.conj().T
    new_labels = (rho.labels[:i]
                  + (Subsystem(rho.labels[i].name, channel.out_dim),)
                  + rho.labels[i + 1:])
    return DensityMatrix(new_labels, out, validate=False)


class Isometry:
    """Matrix with orthonormal columns mapping in_dim into a labeled output factorization."""

    def __init__(self, matrix, in_dim: int, out_labels):
        self.out_labels = _as_subsystems(out_labels)
        out_dim = int(np.prod([s.dim for s in self.out_labels], dtype=np.int64))
        m = np.asarray(matrix, dtype=complex)
        if m.shape != (out_dim, in_dim):
            raise InvariantError(f"isometry shape {m.shape} != ({out_dim},{in_dim})")
        if np.max(np.abs(m.conj().T @ m - np.eye(in_dim))) > COMPLETENESS_TOL:
            raise InvariantError("columns are not orthonormal within 1e-10")
        self.in_dim = in_dim
        self.matrix = _freeze(m)


def isometric_extension(channel: QuantumChannel, out_name: str = "B",
                        env_name: str = "E") -> Isometry:
    """Stinespring dilation V = sum_k K_k (x) |k>_env, environment appended last."""
    nk = len(channel.kraus)
    arr = np.stack(channel.kraus)                      # (nk, out, in)
    v = arr.transpose(1, 0, 2).reshape(channel.out_dim * nk, channel.in_dim)
    return Isometry(v, channel.in_dim,
                    [Subsystem(out_name, channel.out_dim), Subsystem(env_name, nk)])


def _apply_matrix_factor(mat: np.ndarray, out_labels, psi: PureState, on: str):
    """Contract an (out x in) matrix onto the named factor of a pure-state vector.

    Returns the raw (possibly unnormalized) vector and the new label tuple.
    """
    i = psi.index(on)
    out_labels = _as_subsystems(out_labels)
    out_dims = tuple(s.dim for s in out_labels)
    t = psi.vector.reshape(psi.dims)
    block = mat.reshape(out_dims + (psi.dims[i],))
    t = np.tensordot(block, t, axes=([len(out_dims)], [i]))
    t = np.moveaxis(t, range(len(out_dims)), range(i, i + len(out_dims)))
    new_labels = psi.labels[:i] + out_labels + psi.labels[i + 1:]
    return t.reshape(-1), new_labels


def apply_isometry(iso: Isometry, psi: PureState, on: str) -> PureState:
    """Apply an isometry to the named factor of a pure state."""
    i = psi.index(on)
    if psi.labels[i].dim != iso.in_dim:
        raise InvariantError(
            f"subsystem {on!r} has dim {psi.labels[i].dim}, isometry expects {iso.in_dim}"
        )
    clash = (set(psi.names) - {on}) & {s.name for s in iso.out_labels}
    if clash:
        raise InvariantError(f"output labels {sorted(clash)} already present")
    vec, labels = _apply_matrix_factor(iso.matrix, iso.out_labels, psi, on)
    return PureState(labels, vec)


class Instrument:
    """Classically labeled CP branches whose Kraus operators jointly sum to identity."""

    def __init__(self, branches, *, in_dim: int | None = None, out_dim: int | None = None):
        parsed = []
        for outcome, kraus in branches:
            ks = [np.asarray(k, dtype=complex) for k in kraus]
            if not ks:
                raise InvariantError(f"branch {outcome!r} has no Kraus operators")
            parsed.append((str(outcome), tuple(_freeze(k) for k in ks)))
        out_d, in_d = parsed[0][1][0].shape
        in_dim = in_dim or in_d
        out_dim = out_dim or out_d
        total = np.zeros((in_dim, in_dim), dtype=complex)
        for outcome, ks in parsed:
            for k in ks:
                if k.shape != (out_dim, in_dim):
                    raise InvariantError(
                        f"branch {outcome!r} Kraus shape {k.shape} != ({out_dim},{in_dim})"
                    )
                total += k.conj().T @ k
        if np.max(np.abs(total - np.eye(in_dim))) > COMPLETENESS_TOL:
            raise InvariantError("instrument branches do not sum to a CPTP map within 1e-10")
        names = [o for o, _ in parsed]
        if len(set(names)) != len(names):
            raise InvariantError(f"duplicate outcome labels {names}")
        self.branches = tuple(parsed)
        self.in_dim = in_dim
        self.out_dim = out_dim

    @property
    def outcomes(self) -> tuple[str, ...]:
        return tuple(o for o, _ in self.branches)

    def __repr__(self):
        return f"Instrument(in={self.in_dim}, out={self.out_dim}, outcomes={len(self.branches)})"


def trivial_instrument(dim: int = 2) -> Instrument:
    return Instrument([("0", [np.eye(dim)])])


def classical_flag_state(weights, states, x_name: str = "X") -> DensityMatrix:
    """Assemble sum_x p(x) |x><x|_X (x) tau_x with the flag as the first subsystem."""
    weights = np.asarray(weights, dtype=float)
    if weights.size != len(states) or weights.size == 0:
        raise InvariantError("need one weight per state")
    if np.any(weights < -1e-12) or abs(weights.sum() - 1.0) > TRACE_TOL:
        raise InvariantError("weights must be nonnegative and sum to 1 within 1e-10")
    base = states[0]
    for s in states[1:]:
        if s.names != base.names or s.dims != base.dims:
            raise InvariantError("conditional states must share labels and dims")
    d = base.matrix.shape[0]
    nx = weights.size
    out = np.zeros((nx * d, nx * d), dtype=complex)
    for x, (p, s) in enumerate(zip(weights, states)):
        out[x * d:(x + 1) * d, x * d:(x + 1) * d] = p * s.matrix
    labels = (Subsystem(x_name, nx),) + base.labels
    return DensityMatrix(labels, out, validate=False)


class DilatedInstrument:
    """Branch dilations V_x = sum_k M_{x,k} (x) |k>_{E'} of a quantum instrument.

    Applying it to a pure state on (A, rest) produces the classically flagged
    extension state on (X, A', rest, E'), one block per measurement outcome.
    """

    def __init__(self, instrument: Instrument, a_prime: str = "A'",
                 e_prime: str = "E'", x_name: str = "X"):
        self.instrument = instrument
        self.a_prime = a_prime
        self.e_prime = e_prime
        self.x_name = x_name
        self.env_dim = max(len(ks) for _, ks in instrument.branches)
        mats = []
        for _, ks in instrument.branches:
            v = np.zeros((instrument.out_dim * self.env_dim, instrument.in_dim),
                         dtype=complex)
            for k, m in enumerate(ks):
                arr = np.zeros((instrument.out_dim, self.env_dim, instrument.in_dim),
                               dtype=complex)
                arr[:, k, :] = m
                v += arr.reshape(instrument.out_dim * self.env_dim, instrument.in_dim)
            mats.append(_freeze(v))
        self.branch_isometries = tuple(mats)

    def apply(self, psi: PureState, on: str) -> DensityMatrix:
        i = psi.index(on)
        if psi.labels[i].dim != self.instrument.in_dim:
            raise InvariantError(
                f"subsystem {on!r} has dim {psi.labels[i].dim}, "
                f"instrument expects {self.instrument.in_dim}"
            )
        out_labels = (Subsystem(self.a_prime, self.instrument.out_dim),
                      Subsystem(self.e_prime, self.env_dim))
        probs = []
        conds = []
        labels = None
        for v in self.branch_isometries:
            vec, labels = _apply_matrix_factor(v, out_labels, psi, on)
            p = float(np.vdot(vec, vec).real)
            probs.append(p)
            if p > 1e-14:
                conds.append(np.outer(vec, vec.conj()) / p)
            else:
                conds.append(np.zeros((vec.size, vec.size), dtype=complex))
        probs = np.asarray(probs)
        if abs(probs.sum() - 1.0) > TRACE_TOL:
            raise InvariantError(f"branch probabilities sum to {probs.sum()}, not 1")
        # zero-probability branches keep a valid (maximally mixed) placeholder block
        for j, p in enumerate(probs):
            if p <= 1e-14:
                d = conds[j].shape[0]
                conds[j] = np.eye(d) / d
        states = [DensityMatrix(labels, c, validate=False) for c in conds]
        return classical_flag_state(probs, states, x_name=self.x_name)

    def outcome_probabilities(self, psi: PureState, on: str) -> np.ndarray:
        out_labels = (Subsystem(self.a_prime, self.instrument.out_dim),
                      Subsystem(self.e_prime, self.env_dim))
        ps = []
        for v in self.branch_isometries:
            vec, _ = _apply_matrix_factor(v, out_labels, psi, on)
            ps.append(float(np.vdot(vec, vec).real))
        return np.asarray(ps)


def dilate_instrument(instrument: Instrument, a_prime: str = "A'",
                      e_prime: str = "E'", x_name: str = "X") -> DilatedInstrument:
    return DilatedInstrument(instrument, a_prime, e_prime, x_name)
