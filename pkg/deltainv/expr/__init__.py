"""Expression parsing and exact second-order evaluation."""

from deltainv.expr.jet import Jet2, eval_jet2
from deltainv.expr.model import Binary, Constant, Expression, Parameter, Unary, Variable
from deltainv.expr.parser import parse_expression

__all__ = [
    "Binary",
    "Constant",
    "Expression",
    "Jet2",
    "Parameter",
    "Unary",
    "Variable",
    "eval_jet2",
    "parse_expression",
]
