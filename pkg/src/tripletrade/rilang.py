"""A small resource-inequality language: parser, canonical printer, derivability.

Grammar (whitespace-insensitive)::

    expr     := sum ">=" sum
    sum      := term ("+" term)*
    term     := number? resource
    resource := "[c->c]" | "[q->q]" | "[qq]" | "[cc]" | "<" ident ">"

Numbers are nonnegative decimals with an optional fractional part.  Consuming
the left side suffices to produce the right side; net rates count the right
side positive and the left side negative on the (C, Q, E) axes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .lp import nonneg_combination

UNIT_RESOURCES = ("c->c", "q->q", "qq", "cc")
_AXIS = {"c->c": 0, "q->q": 1, "qq": 2}
_NUMBER_RE = re.compile(r"\d+(?:\.\d+)?|\.\d+")
_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_'\-]*")


class RIParseError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


class RIRateError(ValueError):
    """The expression cannot be reduced to a (C, Q, E) rate triple."""


@dataclass(frozen=True)
class ResourceTerm:
    coefficient: float
    resource: str
    noisy: bool = False

    def render(self) -> str:
        body = f"<{self.resource}>" if self.noisy else f"[{self.resource}]"
        c = self.coefficient
        if abs(c - 1.0) <= 0.0:
            return body
        text = str(int(c)) if float(c).is_integer() else repr(float(c))
        return text + body


@dataclass(frozen=True)
class ResourceExpr:
    lhs: tuple
    rhs: tuple

    def render(self) -> str:
        left = " + ".join(t.render() for t in self.lhs)
        right = " + ".join(t.render() for t in self.rhs)
        return f"{left} >= {right}"


def _tokenize(text: str):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch == "[":
            j = text.find("]", i)
            if j < 0:
                raise RIParseError("unterminated '[' resource token", i)
            token = text[i:j + 1]
            name = token[1:-1]
            if name not in UNIT_RESOURCES:
                raise RIParseError(f"unknown resource token {token!r}", i)
            tokens.append(("RES", name, i))
            i = j + 1
        elif ch == "<":
            j = text.find(">", i)
            if j < 0:
                raise RIParseError("unterminated '<' resource name", i)
            name = text[i + 1:j]
            if not _IDENT_RE.fullmatch(name):
                raise RIParseError(f"bad noisy-resource name {name!r}", i)
            tokens.append(("NOISY", name, i))
            i = j + 1
        elif ch == "+":
            tokens.append(("PLUS", "+", i))
            i += 1
        elif text.startswith(">=", i):
            tokens.append(("GEQ", ">=", i))
            i += 2
        else:
            m = _NUMBER_RE.match(text, i)
            if m:
                tokens.append(("NUM", m.group(), i))
                i = m.end()
            else:
                raise RIParseError(f"unexpected character {ch!r}", i)
    return tokens


class _Parser:
    def __init__(self, tokens, length: int):
        self.tokens = tokens
        self.pos = 0
        self.length = length

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else ("EOF", "", self.length)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def parse_term(self) -> ResourceTerm:
        kind, value, offset = self.peek()
        coeff = 1.0
        if kind == "NUM":
            coeff = float(value)
            self.take()
            kind, value, offset = self.peek()
        if kind == "RES":
            self.take()
            return ResourceTerm(coeff, value, noisy=False)
        if kind == "NOISY":
            self.take()
            return ResourceTerm(coeff, value, noisy=True)
        raise RIParseError(f"expected a resource, found {value!r}", offset)

    def parse_sum(self) -> tuple:
        terms = [self.parse_term()]
        while self.peek()[0] == "PLUS":
            self.take()
            terms.append(self.parse_term())
        return tuple(terms)


def parse(text: str) -> ResourceExpr:
    """Parse a full resource inequality ``sum >= sum``."""
    parser = _Parser(_tokenize(text), len(text))
    lhs = parser.parse_sum()
    kind, value, offset = parser.take()
    if kind != "GEQ":
        raise RIParseError(f"expected '>=', found {value!r}", offset)
    rhs = parser.parse_sum()
    kind, value, offset = parser.peek()
    if kind != "EOF":
        raise RIParseError(f"trailing input {value!r}", offset)
    return ResourceExpr(lhs, rhs)


def parse_sum(text: str) -> tuple:
    """Parse a bare resource sum (used for derivability targets)."""
    parser = _Parser(_tokenize(text), len(text))
    terms = parser.parse_sum()
    kind, value, offset = parser.peek()
    if kind != "EOF":
        raise RIParseError(f"trailing input {value!r}", offset)
    return terms


def print_expr(expr: ResourceExpr) -> str:
    """Canonical rendering: unit coefficients elided, single spaces, fixpoint of parse."""
    return expr.render()


@dataclass(frozen=True)
class NetRate:
    triple: np.ndarray
    noisy: str | None = None


def _accumulate(terms, sign: float, triple: np.ndarray, side: str, noisy_seen: list):
    for t in terms:
        if t.noisy:
            if side == "rhs":
                raise RIRateError("noisy resources may only appear on the left-hand side")
            if noisy_seen:
                raise RIRateError("at most one noisy resource per expression")
            if t.coefficient != 1.0:
                raise RIRateError("noisy resources carry no rate arithmetic "
                                  "(coefficient must be 1)")
            noisy_seen.append(t.resource)
            continue
        if t.resource == "cc":
            raise RIRateError("common randomness [cc] has no axis in the 3-d rate space")
        triple[_AXIS[t.resource]] += sign * t.coefficient


def net_rate(expr: ResourceExpr) -> NetRate:
    """Net (C, Q, E) triple: right side generated (+), left side consumed (-)."""
    triple = np.zeros(3)
    noisy: list = []
    _accumulate(expr.lhs, -1.0, triple, "lhs", noisy)
    _accumulate(expr.rhs, +1.0, triple, "rhs", noisy)
    return NetRate(triple, noisy[0] if noisy else None)


def _net_of(target) -> NetRate:
    if isinstance(target, ResourceExpr):
        return net_rate(target)
    text = str(target)
    if ">=" in text:
        return net_rate(parse(text))
    # a bare sum is read as the resources to be produced from nothing
    triple = np.zeros(3)
    noisy: list = []
    _accumulate(parse_sum(text), +1.0, triple, "rhs", noisy)
    return NetRate(triple, None)


@dataclass
class Derivability:
    ok: bool
    coefficients: np.ndarray     # one nonnegative weight per protocol
    waste: np.ndarray            # discarded (C, Q, E), nonnegative
    residual: float

    def replay(self, protocol_nets) -> np.ndarray:
        out = np.zeros(3)
        for w, v in zip(self.coefficients, protocol_nets):
            out += w * v
        return out - self.waste


def derivable(target, protocols, tol: float = 1e-9) -> Derivability:
    """Decide whether the target's net rate lies in the protocol cone plus waste.

    Waste means discarding any of the three unit resources.  The certificate
    carries the protocol weights and the wasted amounts per axis.
    """
    nets = []
    for p in protocols:
        expr = p if isinstance(p, ResourceExpr) else parse(str(p))
        nets.append(net_rate(expr).triple)
    target_net = _net_of(target).triple
    cols = np.hstack([np.asarray(nets).T if nets else np.zeros((3, 0)), -np.eye(3)])
    ok, w, residual = nonneg_combination(cols, target_net, tol=tol)
    return Derivability(ok=ok, coefficients=w[:len(nets)], waste=w[len(nets):],
                        residual=residual)


# Canonical expressions for the three unit protocols.
TELEPORTATION = "2[c->c] + [qq] >= [q->q]"
SUPER_DENSE_CODING = "[q->q] + [qq] >= 2[c->c]"
ENTANGLEMENT_DISTRIBUTION = "[q->q] >= [qq]"
