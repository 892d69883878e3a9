"""Expression trees for closed-form meromorphic functions of one variable s.

Nodes: constants, the variable s, exponentials lam^s with real lam > 0, sums,
products, quotients, and integer powers.  lam^s is computed as exp(s*ln(lam)),
so it is single valued.  Evaluation accepts a complex scalar or a numpy array
of complex values; argument shifts s -> s-c stay inside the same node algebra
(lam^(s-c) = lam^-c * lam^s).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

__all__ = [
    "Const",
    "Expr",
    "IPow",
    "PowL",
    "Prod",
    "Quot",
    "Sum",
    "Var",
    "add",
    "const",
    "div",
    "eval_expr",
    "expr_from_json",
    "expr_to_json",
    "ipow",
    "mul",
    "powl",
    "shift_expr",
    "var",
]


class Expr:
    """Marker base class for expression nodes."""

    __slots__ = ()


@dataclass(frozen=True)
class Const(Expr):
    value: complex


@dataclass(frozen=True)
class Var(Expr):
    """The complex variable s."""


@dataclass(frozen=True)
class PowL(Expr):
    """lam ** s for a fixed real lam > 0."""

    lam: float

    def __post_init__(self):
        if not self.lam > 0:
            raise ConfigError(f"exponential base must be positive, got {self.lam}")


@dataclass(frozen=True)
class Sum(Expr):
    terms: tuple[Expr, ...]


@dataclass(frozen=True)
class Prod(Expr):
    factors: tuple[Expr, ...]


@dataclass(frozen=True)
class Quot(Expr):
    num: Expr
    den: Expr


@dataclass(frozen=True)
class IPow(Expr):
    base: Expr
    n: int


def const(value) -> Const:
    return Const(complex(value))


def var() -> Var:
    return Var()


def powl(lam: float) -> PowL:
    return PowL(float(lam))


def add(*terms: Expr) -> Sum:
    return Sum(tuple(terms))


def mul(*factors: Expr) -> Prod:
    return Prod(tuple(factors))


def div(num: Expr, den: Expr) -> Quot:
    return Quot(num, den)


def ipow(base: Expr, n: int) -> IPow:
    return IPow(base, int(n))


def eval_expr(expr: Expr, s):
    """Evaluate at a complex scalar or numpy array; returns the same shape."""
    scalar = np.isscalar(s) or isinstance(s, complex)
    sv = np.asarray(s, dtype=np.complex128)
    out = _eval(expr, sv)
    out = np.broadcast_to(np.asarray(out, dtype=np.complex128), sv.shape)
    if scalar:
        return complex(out)
    return np.array(out, dtype=np.complex128)


def _eval(expr: Expr, s):
    if isinstance(expr, Const):
        return expr.value
    if isinstance(expr, Var):
        return s
    if isinstance(expr, PowL):
        return np.exp(s * math.log(expr.lam))
    if isinstance(expr, Sum):
        acc = _eval(expr.terms[0], s)
        for term in expr.terms[1:]:
            acc = acc + _eval(term, s)
        return acc
    if isinstance(expr, Prod):
        acc = _eval(expr.factors[0], s)
        for factor in expr.factors[1:]:
            acc = acc * _eval(factor, s)
        return acc
    if isinstance(expr, Quot):
        return _eval(expr.num, s) / _eval(expr.den, s)
    if isinstance(expr, IPow):
        base = np.asarray(_eval(expr.base, s), dtype=np.complex128)
        n = expr.n
        if n >= 0:
            return base**n
        return 1.0 / base ** (-n)
    raise ConfigError(f"unknown expression node {expr!r}")


def shift_expr(expr: Expr, c: float) -> Expr:
    """Rewrite the tree so that it evaluates the original at s - c."""
    if isinstance(expr, Const):
        return expr
    if isinstance(expr, Var):
        return Sum((Var(), Const(complex(-c)))) if c != 0 else expr
    if isinstance(expr, PowL):
        if c == 0:
            return expr
        return Prod((Const(complex(expr.lam ** (-c))), expr))
    if isinstance(expr, Sum):
        return Sum(tuple(shift_expr(t, c) for t in expr.terms))
    if isinstance(expr, Prod):
        return Prod(tuple(shift_expr(f, c) for f in expr.factors))
    if isinstance(expr, Quot):
        return Quot(shift_expr(expr.num, c), shift_expr(expr.den, c))
    if isinstance(expr, IPow):
        return IPow(shift_expr(expr.base, c), expr.n)
    raise ConfigError(f"unknown expression node {expr!r}")


def expr_to_json(expr: Expr) -> dict:
    if isinstance(expr, Const):
        return {"node": "const", "re": expr.value.real, "im": expr.value.imag}
    if isinstance(expr, Var):
        return {"node": "var"}
    if isinstance(expr, PowL):
        return {"node": "exp", "base": expr.lam}
    if isinstance(expr, Sum):
        return {"node": "sum", "terms": [expr_to_json(t) for t in expr.terms]}
    if isinstance(expr, Prod):
        return {"node": "product", "factors": [expr_to_json(f) for f in expr.factors]}
    if isinstance(expr, Quot):
        return {"node": "quotient", "num": expr_to_json(expr.num), "den": expr_to_json(expr.den)}
    if isinstance(expr, IPow):
        return {"node": "ipow", "base": expr_to_json(expr.base), "n": expr.n}
    raise ConfigError(f"unserializable expression node {expr!r}")


def expr_from_json(doc: dict) -> Expr:
    try:
        node = doc["node"]
        if node == "const":
            return Const(complex(doc["re"], doc.get("im", 0.0)))
        if node == "var":
            return Var()
        if node == "exp":
            return PowL(float(doc["base"]))
        if node == "sum":
            return Sum(tuple(expr_from_json(t) for t in doc["terms"]))
        if node == "product":
            return Prod(tuple(expr_from_json(f) for f in doc["factors"]))
        if node == "quotient":
            return Quot(expr_from_json(doc["num"]), expr_from_json(doc["den"]))
        if node == "ipow":
            return IPow(expr_from_json(doc["base"]), int(doc["n"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed expression document: {exc}") from exc
    raise ConfigError(f"unknown expression node kind {doc.get('node')!r}")
