"""Builders for the two classically flagged extension states every rate formula uses.

Dynamic case: sigma^{XABE} from an ensemble of bipartite pure states fed
through an isometric channel extension.  Static case: sigma^{XA'BEE'} from a
canonical purification acted on by a dilated instrument.  The classical flag X
is an ordinary (diagonal, block-structured) subsystem so the generic entropy
engine serves classical-quantum and fully quantum systems alike.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .quantum import (DensityMatrix, Instrument, InvariantError, PureState, QuantumChannel,
                      Subsystem, apply_isometry, classical_flag_state, dilate_instrument,
                      isometric_extension, purify, reorder)

MAX_OUTCOMES = 16


@dataclass(frozen=True)
class Ensemble:
    """Pure-state ensemble {p(x), psi_x} on A (kept) tensor A' (channel input)."""

    a_dim: int
    a_prime_dim: int
    entries: tuple          # ((probability, vector), ...) with len(vector) = a_dim*a_prime_dim

    def __post_init__(self):
        if not self.entries:
            raise InvariantError("ensemble needs at least one entry")
        if len(self.entries) > MAX_OUTCOMES:
            raise InvariantError(f"ensemble cardinality {len(self.entries)} "
                                 f"exceeds cap {MAX_OUTCOMES}")
        total = 0.0
        d = self.a_dim * self.a_prime_dim
        for p, v in self.entries:
            if p < -1e-12:
                raise InvariantError(f"negative probability {p}")
            v = np.asarray(v)
            if v.shape != (d,):
                raise InvariantError(f"entry vector length {v.shape} != {d}")
            if abs(np.linalg.norm(v) - 1.0) > 1e-10:
                raise InvariantError("ensemble states must be normalized pure vectors")
            total += p
        if abs(total - 1.0) > 1e-10:
            raise InvariantError(f"probabilities sum to {total}, not 1 within 1e-10")

    @property
    def probabilities(self) -> np.ndarray:
        return np.array([p for p, _ in self.entries], dtype=float)

    def state(self, x: int) -> PureState:
        _, v = self.entries[x]
        return PureState([Subsystem("A", self.a_dim), Subsystem("A'", self.a_prime_dim)],
                         np.asarray(v, dtype=complex))


def make_ensemble(entries, a_dim: int, a_prime_dim: int) -> Ensemble:
    return Ensemble(a_dim=a_dim, a_prime_dim=a_prime_dim,
                    entries=tuple((float(p), np.asarray(v, dtype=complex)) for p, v in entries))


def single_state_ensemble(vector, a_dim: int, a_prime_dim: int) -> Ensemble:
    return make_ensemble([(1.0, vector)], a_dim, a_prime_dim)


def product_ensemble(ens: Ensemble, k: int) -> Ensemble:
    """k-fold product ensemble with copies fused into single A / A' systems."""
    if k == 1:
        return ens
    if k != 2:
        raise InvariantError("only k in {1, 2} is supported")
    entries = []
    for (p1, v1) in ens.entries:
        for (p2, v2) in ens.entries:
            s1 = PureState([Subsystem("A1", ens.a_dim), Subsystem("P1", ens.a_prime_dim)], v1)
            s2 = PureState([Subsystem("A2", ens.a_dim), Subsystem("P2", ens.a_prime_dim)], v2)
            joint = PureState(s1.labels + s2.labels, np.kron(s1.vector, s2.vector))
            joint = reorder(joint, ("A1", "A2", "P1", "P2"))
            entries.append((p1 * p2, joint.vector))
    return make_ensemble(entries, ens.a_dim ** 2, ens.a_prime_dim ** 2)


def build_sigma_dynamic(channel: QuantumChannel, ens: Ensemble) -> DensityMatrix:
    """sigma^{XABE}: classical flag, kept system, channel output, environment."""
    if ens.a_prime_dim != channel.in_dim:
        raise InvariantError(f"ensemble A' dim {ens.a_prime_dim} != channel "
                             f"input dim {channel.in_dim}")
    iso = isometric_extension(channel, out_name="B", env_name="E")
    conds = []
    for x in range(len(ens.entries)):
        psi = apply_isometry(iso, ens.state(x), on="A'")   # labels A, B, E
        conds.append(psi.to_density())
    return classical_flag_state(ens.probabilities, conds, x_name="X")


def build_sigma_static(rho: DensityMatrix, instrument: Instrument) -> DensityMatrix:
    """sigma^{XA'BEE'}: purify rho^{AB}, then apply the dilated instrument on A."""
    if set(rho.names) != {"A", "B"}:
        raise InvariantError(f"expected a state on labels A, B; got {rho.names}")
    if instrument.in_dim != rho.subsystem("A").dim:
        raise InvariantError(f"instrument input dim {instrument.in_dim} != "
                             f"dim(A) {rho.subsystem('A').dim}")
    # rank-trimmed environment: zero-weight directions change no entropy and
    # keep two-copy inputs under the dimension cap
    from .quantum import clipped_eigvalsh

    rank = int(np.sum(clipped_eigvalsh(rho.matrix) > 1e-12))
    psi = purify(rho, env_name="E", env_dim=rank)
    dil = dilate_instrument(instrument, a_prime="A'", e_prime="E'", x_name="X")
    sigma = dil.apply(psi, on="A")                       # labels X, A', E', B, E
    return reorder(sigma, ("X", "A'", "B", "E", "E'"))


def instrument_outcome_probabilities(rho: DensityMatrix, instrument: Instrument) -> np.ndarray:
    """p(x) = Tr sum_k M_{x,k} rho^A M_{x,k}^dag, straight from the A marginal."""
    from .quantum import partial_trace

    rho_a = partial_trace(rho, "A").matrix
    return np.array([sum(float(np.trace(k @ rho_a @ k.conj().T).real) for k in ks)
                     for _, ks in instrument.branches])


# ---------------------------------------------------------------------------
# JSON schema: complex matrices encoded row-major as [re, im] pairs
# ---------------------------------------------------------------------------

def complex_to_json(arr: np.ndarray):
    arr = np.asarray(arr, dtype=complex)
    if arr.ndim == 1:
        return [[float(z.real), float(z.imag)] for z in arr]
    return [[[float(z.real), float(z.imag)] for z in row] for row in arr]


def complex_from_json(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.ndim == 2:            # vector: list of [re, im]
        return arr[:, 0] + 1j * arr[:, 1]
    if arr.ndim == 3:            # matrix: rows of [re, im]
        return arr[:, :, 0] + 1j * arr[:, :, 1]
    raise ValueError(f"bad complex array payload with ndim {arr.ndim}")


def ensemble_to_json(ens: Ensemble) -> dict:
    return {
        "a_dim": ens.a_dim,
        "a_prime_dim": ens.a_prime_dim,
        "entries": [{"probability": float(p), "state": complex_to_json(np.asarray(v))}
                    for p, v in ens.entries],
    }


def ensemble_from_json(data: dict) -> Ensemble:
    entries = [(e["probability"], complex_from_json(e["state"]))
               for e in data["entries"]]
    return make_ensemble(entries, int(data["a_dim"]), int(data["a_prime_dim"]))


def instrument_to_json(inst: Instrument) -> dict:
    return {
        "in_dim": inst.in_dim,
        "out_dim": inst.out_dim,
        "branches": [{"outcome": o, "kraus": [complex_to_json(k) for k in ks]}
                     for o, ks in inst.branches],
    }


def instrument_from_json(data: dict) -> Instrument:
    branches = [(b["outcome"], [complex_from_json(k) for k in b["kraus"]])
                for b in data["branches"]]
    return Instrument(branches, in_dim=int(data["in_dim"]), out_dim=int(data["out_dim"]))
