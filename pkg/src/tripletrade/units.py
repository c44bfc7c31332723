"""The three unit protocols, the exact unit-resource region, and its octant bounds."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import RateRegion, as_triple

# Rate vectors (C, Q, E): consumption negative, generation positive.
TP = np.array([-2.0, 1.0, -1.0])   # teleportation
SD = np.array([2.0, -1.0, -1.0])   # super-dense coding
ED = np.array([0.0, -1.0, 1.0])    # entanglement distribution

UNIT_VECTORS = {"TP": TP, "SD": SD, "ED": ED}

# Facets of cone{TP, SD, ED}: C+Q+E <= 0, Q+E <= 0, C+2Q <= 0.
UNIT_FACETS = (
    (np.array([1.0, 1.0, 1.0]), 0.0),
    (np.array([0.0, 1.0, 1.0]), 0.0),
    (np.array([1.0, 2.0, 0.0]), 0.0),
)


def unit_region() -> RateRegion:
    """cone{TP, SD, ED}: everything reachable from unit protocols alone."""
    return RateRegion(points=[[0.0, 0.0, 0.0]], rays=[TP, SD, ED])


@dataclass(frozen=True)
class UnitCoefficients:
    """Protocol weights (alpha, beta, gamma) = (TP, SD, ED) decomposing a triple."""

    alpha: float
    beta: float
    gamma: float
    feasible: bool

    def as_array(self) -> np.ndarray:
        return np.array([self.alpha, self.beta, self.gamma])


def unit_coefficients(x, tol: float = 1e-9) -> UnitCoefficients:
    """Invert the generator matrix: x = alpha TP + beta SD + gamma ED.

    Feasible (inside the unit region) iff all three weights are >= -tol.
    """
    c, q, e = as_triple(x)
    alpha = -(c + q + e) / 2.0
    beta = -(q + e) / 2.0
    gamma = -(c + 2.0 * q) / 2.0
    feasible = bool(min(alpha, beta, gamma) >= -tol)
    return UnitCoefficients(alpha, beta, gamma, feasible)


@dataclass
class BoundCheck:
    """One inequality lhs <= rhs with its numerical slack (rhs - lhs)."""

    label: str
    lhs: float
    rhs: float

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    def ok(self, tol: float = 1e-9) -> bool:
        return self.slack >= -tol


@dataclass
class Verdict:
    """Outcome of a converse-bound predicate: all inequalities with slacks."""

    name: str
    checks: list
    tol: float = 1e-9

    @property
    def passed(self) -> bool:
        return all(c.ok(self.tol) for c in self.checks)

    @property
    def min_slack(self) -> float:
        return min((c.slack for c in self.checks), default=float("inf"))

    def lines(self):
        out = []
        for c in self.checks:
            state = "ok" if c.ok(self.tol) else "VIOLATED"
            out.append(f"{c.label}: {c.lhs:.12g} <= {c.rhs:.12g}  "
                       f"(slack {c.slack:+.3e}) {state}")
        return out


def _octant_checks(signs: tuple[str, str, str], x: np.ndarray):
    c, q, e = x
    if signs == ("+", "+", "+"):
        return [BoundCheck("C <= 0", c, 0.0), BoundCheck("Q <= 0", q, 0.0),
                BoundCheck("E <= 0", e, 0.0)]
    if signs == ("+", "+", "-"):
        return [BoundCheck("C <= 0", c, 0.0), BoundCheck("Q <= 0", q, 0.0)]
    if signs == ("-", "+", "+"):
        return [BoundCheck("Q <= 0", q, 0.0), BoundCheck("E <= 0", e, 0.0)]
    if signs == ("+", "-", "+"):
        return [BoundCheck("C+E <= |Q|", c + e, abs(q))]
    if signs == ("+", "-", "-"):
        return [BoundCheck("C <= 2|Q|", c, 2.0 * abs(q)),
                BoundCheck("C <= |Q|+|E|", c, abs(q) + abs(e))]
    if signs == ("-", "+", "-"):
        return [BoundCheck("Q <= |E|", q, abs(e)),
                BoundCheck("2Q <= |C|", 2.0 * q, abs(c))]
    if signs == ("-", "-", "+"):
        return [BoundCheck("E <= |Q|", e, abs(q))]
    return []  # (-,-,-): entirely inside the region


def octant_bound_check(x, tol: float = 1e-9) -> Verdict:
    """Evaluate the unit-region converse bounds of every octant whose closure holds x.

    Coordinates within tol of zero belong to several octant closures; the
    verdict conjoins all of them (they agree exactly on shared boundaries).
    """
    x = as_triple(x)
    options = []
    for v in x:
        if abs(v) <= tol:
            options.append(("+", "-"))
        elif v > 0:
            options.append(("+",))
        else:
            options.append(("-",))
    checks = []
    names = []
    for sc in options[0]:
        for sq in options[1]:
            for se in options[2]:
                names.append(sc + sq + se)
                checks.extend(_octant_checks((sc, sq, se), x))
    # drop duplicate inequalities picked up from neighboring octants
    seen = set()
    uniq = []
    for ch in checks:
        key = (ch.label, round(ch.lhs, 12), round(ch.rhs, 12))
        if key not in seen:
            seen.add(key)
            uniq.append(ch)
    return Verdict(name="octant " + "/".join(names), checks=uniq, tol=tol)
