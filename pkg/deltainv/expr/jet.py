"""Second-order forward-mode jets.

A :class:`Jet2` carries a value together with its exact gradient and Hessian with
respect to the chart coordinates. Arithmetic on jets is truncated at second order,
so derivatives come out exact up to rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np

from deltainv.exceptions import EvaluationDomainError, UnboundParameterError
from deltainv.expr.model import Binary, Constant, Expression, Node, Parameter, Unary, Variable, has_variable


def _symmetric(hessian: np.ndarray) -> np.ndarray:
    upper = np.triu(hessian)
    return upper + np.triu(hessian, 1).T


@dataclass(frozen=True, eq=False)
class Jet2:
    """Value, gradient and Hessian of a scalar function at a point.

    The Hessian is rebuilt from its upper triangle on construction, so it is
    exactly symmetric.
    """

    value: float
    gradient: np.ndarray
    hessian: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))
        object.__setattr__(self, "gradient", np.asarray(self.gradient, dtype=float))
        object.__setattr__(self, "hessian", _symmetric(np.asarray(self.hessian, dtype=float)))

    @property
    def dim(self) -> int:
        return self.gradient.shape[0]

    @classmethod
    def constant(cls, value: float, dim: int) -> "Jet2":
        return cls(value, np.zeros(dim), np.zeros((dim, dim)))

    @classmethod
    def variable(cls, value: float, index: int, dim: int) -> "Jet2":
        gradient = np.zeros(dim)
        gradient[index] = 1.0
        return cls(value, gradient, np.zeros((dim, dim)))

    def chain(self, f0: float, f1: float, f2: float) -> "Jet2":
        """Compose with a scalar function whose value and first two derivatives are given."""
        g = self.gradient
        return Jet2(f0, f1 * g, f1 * self.hessian + f2 * np.outer(g, g))

    def _lift(self, other) -> "Jet2":
        if isinstance(other, Jet2):
            return other
        return Jet2.constant(float(other), self.dim)

    def __add__(self, other) -> "Jet2":
        other = self._lift(other)
        return Jet2(self.value + other.value, self.gradient + other.gradient, self.hessian + other.hessian)

    __radd__ = __add__

    def __neg__(self) -> "Jet2":
        return Jet2(-self.value, -self.gradient, -self.hessian)

    def __sub__(self, other) -> "Jet2":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "Jet2":
        return self._lift(other) - self

    def __mul__(self, other) -> "Jet2":
        other = self._lift(other)
        a, b = self, other
        cross = np.outer(a.gradient, b.gradient)
        return Jet2(
            a.value * b.value,
            a.value * b.gradient + b.value * a.gradient,
            a.value * b.hessian + b.value * a.hessian + cross + cross.T,
        )

    __rmul__ = __mul__

    def reciprocal(self) -> "Jet2":
        b = self.value
        if b == 0.0:
            raise EvaluationDomainError("/", b)
        return self.chain(1.0 / b, -1.0 / (b * b), 2.0 / (b * b * b))

    def __truediv__(self, other) -> "Jet2":
        return self * self._lift(other).reciprocal()

    def __rtruediv__(self, other) -> "Jet2":
        return self._lift(other) * self.reciprocal()

    def power(self, exponent: float) -> "Jet2":
        """Raise to a constant real exponent."""
        a, p = self.value, float(exponent)
        integral = p.is_integer()
        if a < 0 and not integral:
            raise EvaluationDomainError("^", a)

        def term(coeff: float, q: float) -> float:
            if coeff == 0.0:
                return 0.0
            if a == 0.0 and q < 0:
                raise EvaluationDomainError("^", a)
            return coeff * a**q

        if a == 0.0 and p < 0:
            raise EvaluationDomainError("^", a)
        return self.chain(a**p if p != 0 else 1.0, term(p, p - 1), term(p * (p - 1), p - 2))

    def __pow__(self, other) -> "Jet2":
        if isinstance(other, Jet2):
            return general_power(self, other)
        return self.power(other)


def general_power(base: Jet2, exponent: Jet2) -> Jet2:
    """``base ^ exponent`` for a non-constant exponent, evaluated as exp(b ln a) with a > 0."""
    if base.value <= 0.0:
        raise EvaluationDomainError("^", base.value)
    return apply_function("exp", exponent * apply_function("ln", base))


def _check(op: str, ok: bool, value: float) -> None:
    if not ok:
        raise EvaluationDomainError(op, value)


def _sin(a):
    s, c = math.sin(a), math.cos(a)
    return s, c, -s


def _cos(a):
    s, c = math.sin(a), math.cos(a)
    return c, -s, -c


def _tan(a):
    _check("tan", math.cos(a) != 0.0, a)
    t = math.tan(a)
    d = 1.0 + t * t
    return t, d, 2.0 * t * d


def _exp(a):
    e = math.exp(a)
    return e, e, e


def _ln(a):
    _check("ln", a > 0.0, a)
    return math.log(a), 1.0 / a, -1.0 / (a * a)


def _sqrt(a):
    _check("sqrt", a > 0.0, a)
    s = math.sqrt(a)
    return s, 0.5 / s, -0.25 / (s * s * s)


def _sinh(a):
    s, c = math.sinh(a), math.cosh(a)
    return s, c, s


def _cosh(a):
    s, c = math.sinh(a), math.cosh(a)
    return c, s, c


def _tanh(a):
    t = math.tanh(a)
    d = 1.0 - t * t
    return t, d, -2.0 * t * d


_DERIVATIVES: dict[str, Callable[[float], tuple[float, float, float]]] = {
    "sin": _sin,
    "cos": _cos,
    "tan": _tan,
    "exp": _exp,
    "ln": _ln,
    "sqrt": _sqrt,
    "sinh": _sinh,
    "cosh": _cosh,
    "tanh": _tanh,
}


def apply_function(name: str, jet: Jet2) -> Jet2:
    """Apply one of the named unary functions to a jet."""
    try:
        f0, f1, f2 = _DERIVATIVES[name](jet.value)
    except OverflowError as exc:
        raise EvaluationDomainError(name, jet.value) from exc
    return jet.chain(f0, f1, f2)


def _evaluate(node: Node, point: np.ndarray, params: Mapping[str, float], dim: int) -> Jet2:
    if isinstance(node, Constant):
        return Jet2.constant(node.value, dim)
    if isinstance(node, Variable):
        return Jet2.variable(point[node.index], node.index, dim)
    if isinstance(node, Parameter):
        if node.name not in params:
            raise UnboundParameterError(node.name)
        return Jet2.constant(params[node.name], dim)
    if isinstance(node, Unary):
        child = _evaluate(node.child, point, params, dim)
        if node.op == "neg":
            return -child
        return apply_function(node.op, child)
    left = _evaluate(node.left, point, params, dim)
    if node.op == "^":
        if has_variable(node.right):
            return general_power(left, _evaluate(node.right, point, params, dim))
        return left.power(_evaluate(node.right, point, params, dim).value)
    right = _evaluate(node.right, point, params, dim)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    if node.op == "*":
        return left * right
    return left / right


def eval_jet2(e: Expression, point: Sequence[float], params: Mapping[str, float] | None = None) -> Jet2:
    """Evaluate ``e`` and its first two derivatives at ``point``.

    Raises
    ------
    EvaluationDomainError
        sqrt or ln outside their domain, division by zero, or an invalid power.
    """
    point = np.asarray(point, dtype=float)
    if point.shape != (e.dim,):
        raise ValueError(f"Expected a point with {e.dim} coordinates, got shape {point.shape}")
    params = dict(params or {})
    missing = [name for name in e.parameters if name not in params]
    if missing:
        raise UnboundParameterError(missing[0])
    try:
        return _evaluate(e.root, point, params, e.dim)
    except OverflowError as exc:
        raise EvaluationDomainError("overflow", float("inf")) from exc
