"""Concrete channels and states with pinned conventions and closed-form references.

Conventions fixed here (the reference values below are only meaningful under
them):

* dephasing(p) acts as rho -> (1 - p/2) rho + (p/2) Z rho Z, so its quantum
  capacity is 1 - H2(p/2); at p = 0.2 that is ~0.531 qubits per channel use.
* the erased state's B system is a qutrit: the qubit code space span{|0>,|1>}
  plus an orthogonal erasure flag |e>.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .entropy import binary_entropy
from .geometry import RateRegion
from .quantum import DensityMatrix, PureState, QuantumChannel, Subsystem
from .units import ED, SD, TP

_Z = np.diag([1.0, -1.0])


def bell_state(a: str = "A", b: str = "B") -> PureState:
    v = np.zeros(4)
    v[0] = v[3] = 1.0 / np.sqrt(2.0)
    return PureState([Subsystem(a, 2), Subsystem(b, 2)], v)


def maximally_entangled(dim: int, a: str = "A", b: str = "B") -> PureState:
    v = np.eye(dim).reshape(-1) / np.sqrt(dim)
    return PureState([Subsystem(a, dim), Subsystem(b, dim)], v)


def dephasing_channel(p: float) -> QuantumChannel:
    """Qubit dephasing: rho -> (1 - p/2) rho + (p/2) Z rho Z."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"dephasing parameter {p} outside [0, 1]")
    return QuantumChannel([np.sqrt(1.0 - p / 2.0) * np.eye(2),
                           np.sqrt(p / 2.0) * _Z])


def erasure_channel(eps: float) -> QuantumChannel:
    """Qubit-to-qutrit erasure: sigma -> (1-eps) sigma (+) eps |e><e|."""
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"erasure parameter {eps} outside [0, 1]")
    keep = np.zeros((3, 2))
    keep[0, 0] = keep[1, 1] = 1.0
    f0 = np.zeros((3, 2))
    f0[2, 0] = 1.0
    f1 = np.zeros((3, 2))
    f1[2, 1] = 1.0
    return QuantumChannel([np.sqrt(1.0 - eps) * keep,
                           np.sqrt(eps) * f0, np.sqrt(eps) * f1])


def erased_state(eps: float, a: str = "A", b: str = "B") -> DensityMatrix:
    """(1-eps) |Phi+><Phi+| + eps (I/2)_A (x) |e><e|_B on a 2 x 3 system."""
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"erasure parameter {eps} outside [0, 1]")
    phi = np.zeros(6)
    phi[0] = phi[4] = 1.0 / np.sqrt(2.0)       # |0>|0>, |1>|1> in the 2x3 layout
    m = (1.0 - eps) * np.outer(phi, phi)
    flag = np.zeros((3, 3))
    flag[2, 2] = 1.0
    m += eps * np.kron(np.eye(2) / 2.0, flag)
    return DensityMatrix([Subsystem(a, 2), Subsystem(b, 3)], m)


# ---------------------------------------------------------------------------
# Closed-form reference records
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ErasedStateReference:
    """Closed-form entropies of the erased state (all in bits)."""

    eps: float
    h_a: float
    h_b: float
    h_ab: float
    coherent_info: float
    half_mi_ab: float
    half_mi_ae: float

    def rows(self):
        return [("H(A)", self.h_a), ("H(B)", self.h_b), ("H(AB)", self.h_ab),
                ("I(A>B)", self.coherent_info), ("I(A;B)/2", self.half_mi_ab),
                ("I(A;E)/2", self.half_mi_ae)]


def erased_state_reference(eps: float) -> ErasedStateReference:
    h2 = binary_entropy(eps)
    return ErasedStateReference(
        eps=eps,
        h_a=1.0,
        h_b=1.0 - eps + h2,
        h_ab=eps + h2,
        coherent_info=1.0 - 2.0 * eps,
        half_mi_ab=1.0 - eps,
        half_mi_ae=eps,
    )


def erased_state_mother_point(eps: float) -> np.ndarray:
    """One-shot static point with a trivial instrument: (0, -eps, 1-eps)."""
    return np.array([0.0, -eps, 1.0 - eps])


def erased_state_wedge_height(eps: float, c_consumed: float) -> float:
    """Optimal distillable ebits at zero quantum rate, given cbit consumption.

    ``c_consumed`` is the positive magnitude of classical consumption; the
    boundary time-shares between the origin and the hashing point, then
    saturates at 1 - 2*eps.
    """
    if c_consumed < 0:
        raise ValueError("classical consumption magnitude must be >= 0")
    if eps <= 0:
        return 1.0
    if eps >= 0.5:
        return 0.0
    if c_consumed >= 2.0 * eps:
        return 1.0 - 2.0 * eps
    return c_consumed * (1.0 - 2.0 * eps) / (2.0 * eps)


def erased_state_static_region(eps: float) -> RateRegion:
    """Single-letter static region: mother point plus the unit cone."""
    return RateRegion([np.zeros(3), erased_state_mother_point(eps)], [TP, SD, ED])


@dataclass(frozen=True)
class DephasingReference:
    """Convention-pinned closed forms for the dephasing channel."""

    p: float
    quantum_capacity: float          # 1 - H2(p/2) under the pinned Kraus convention
    env_entropy_on_bell: float       # H2(p/2)
    note: str = ("values assume rho -> (1-p/2) rho + (p/2) Z rho Z; "
                 "anchored by capacity ~0.5 at p=0.2")

    def rows(self):
        return [("quantum capacity", self.quantum_capacity),
                ("env entropy on Bell input", self.env_entropy_on_bell)]


def dephasing_reference(p: float) -> DephasingReference:
    h2 = binary_entropy(p / 2.0)
    return DephasingReference(p=p, quantum_capacity=1.0 - h2, env_entropy_on_bell=h2)


# ---------------------------------------------------------------------------
# Model spec strings for the CLI: name(:key=value)*
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ModelSpec:
    name: str
    kind: str               # "channel" | "state"
    params: dict

    def build(self):
        if self.name == "dephasing":
            return dephasing_channel(self.params["p"])
        if self.name == "erasure":
            return erasure_channel(self.params["eps"])
        if self.name == "erased":
            return erased_state(self.params["eps"])
        if self.name == "bell":
            return bell_state().to_density()
        raise ValueError(f"unknown model {self.name!r}")

    def __str__(self):
        if not self.params:
            return self.name
        args = ",".join(f"{k}={v:g}" for k, v in sorted(self.params.items()))
        return f"{self.name}:{args}"


_MODEL_KEYS = {
    "dephasing": ("channel", {"p"}),
    "erasure": ("channel", {"eps"}),
    "erased": ("state", {"eps"}),
    "bell": ("state", set()),
}


def parse_model_spec(text: str) -> ModelSpec:
    parts = text.strip().split(":")
    name = parts[0]
    if name not in _MODEL_KEYS:
        raise ValueError(f"unknown model {name!r}; expected one of {sorted(_MODEL_KEYS)}")
    kind, allowed = _MODEL_KEYS[name]
    params = {}
    for chunk in parts[1:]:
        for kv in chunk.split(","):
            if not kv:
                continue
            if "=" not in kv:
                raise ValueError(f"bad model parameter {kv!r} (want key=value)")
            k, v = kv.split("=", 1)
            if k not in allowed:
                raise ValueError(f"model {name!r} does not take parameter {k!r}")
            params[k] = float(v)
    missing = allowed - set(params)
    if missing:
        raise ValueError(f"model {name!r} missing parameters {sorted(missing)}")
    return ModelSpec(name=name, kind=kind, params=params)
