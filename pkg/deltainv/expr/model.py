"""Expression tree nodes.

Nodes are frozen dataclasses, so a parsed :class:`Expression` is immutable and can
be shared between workers. ``to_text`` prints a fully parenthesized form that
parses back to an equivalent tree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence, Union

import numpy as np

#: Named unary functions accepted by the grammar; ``neg`` is the prefix minus.
FUNCTIONS = ("sin", "cos", "tan", "exp", "ln", "sqrt", "sinh", "cosh", "tanh")
UNARY_OPS = ("neg",) + FUNCTIONS
BINARY_OPS = ("+", "-", "*", "/", "^")

#: Identifiers that parse to a constant rather than a symbol.
NAMED_CONSTANTS = {"pi": float(np.pi)}


@dataclass(frozen=True)
class Constant:
    value: float


@dataclass(frozen=True)
class Variable:
    name: str
    index: int


@dataclass(frozen=True)
class Parameter:
    name: str


@dataclass(frozen=True)
class Unary:
    op: str
    child: "Node"

    def __post_init__(self):
        if self.op not in UNARY_OPS:
            raise ValueError(f"Unknown unary op {self.op!r}")


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Node"
    right: "Node"

    def __post_init__(self):
        if self.op not in BINARY_OPS:
            raise ValueError(f"Unknown binary op {self.op!r}")


Node = Union[Constant, Variable, Parameter, Unary, Binary]


def has_variable(node: Node) -> bool:
    """True when ``node`` depends on a chart coordinate."""
    if isinstance(node, Variable):
        return True
    if isinstance(node, Unary):
        return has_variable(node.child)
    if isinstance(node, Binary):
        return has_variable(node.left) or has_variable(node.right)
    return False


def node_to_text(node: Node) -> str:
    if isinstance(node, Constant):
        if node.value < 0:
            return f"(-{-node.value!r})"
        return repr(float(node.value))
    if isinstance(node, (Variable, Parameter)):
        return node.name
    if isinstance(node, Unary):
        if node.op == "neg":
            return f"(-{node_to_text(node.child)})"
        return f"{node.op}({node_to_text(node.child)})"
    return f"({node_to_text(node.left)} {node.op} {node_to_text(node.right)})"


@dataclass(frozen=True)
class Expression:
    """A parsed real-valued function of chart coordinates.

    Parameters
    ----------
    root : Node
        Tree root.
    variables : tuple[str, ...]
        Declared chart coordinates, in the order that points are given.
    parameters : tuple[str, ...]
        Declared named parameters.
    source : str
        The text the tree was parsed from, kept for diagnostics.
    """

    root: Node
    variables: tuple[str, ...]
    parameters: tuple[str, ...] = ()
    source: str = field(default="", compare=False)

    @property
    def dim(self) -> int:
        return len(self.variables)

    def to_text(self) -> str:
        return node_to_text(self.root)

    def jet(self, point: Sequence[float], params: Mapping[str, float] | None = None):
        from deltainv.expr.jet import eval_jet2

        return eval_jet2(self, point, params or {})

    def value(self, point: Sequence[float], params: Mapping[str, float] | None = None) -> float:
        return self.jet(point, params).value

    def __str__(self) -> str:
        return self.source or self.to_text()
