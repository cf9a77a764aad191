"""Lagrangian submanifolds of complex space forms."""

from deltainv.lagrangian.ambient import (
    ComplexAmbient,
    LagrangianData,
    lagrangian_check,
    lagrangian_data,
    whitney_immersion,
)
from deltainv.lagrangian.equality import equality_conditions_check_L3, equality_form_check_L2
from deltainv.lagrangian.inequalities import (
    LagrangianCase,
    LagrangianSample,
    lagrangian_coefficient,
    lagrangian_inequality_check,
    minimality_at_equality_check,
)

__all__ = [
    "ComplexAmbient",
    "LagrangianCase",
    "LagrangianData",
    "LagrangianSample",
    "equality_conditions_check_L3",
    "equality_form_check_L2",
    "lagrangian_check",
    "lagrangian_coefficient",
    "lagrangian_data",
    "lagrangian_inequality_check",
    "minimality_at_equality_check",
    "whitney_immersion",
]
