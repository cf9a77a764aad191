"""Extrinsic geometry of immersions into Euclidean space."""

from deltainv.extrinsic.checks import (
    chen_inequality_check,
    equality_structure_check,
    ideality_check,
    point_ideality,
)
from deltainv.extrinsic.immersion import (
    ImmersionField,
    MeanCurvature,
    SecondFundamentalForm,
    curvature_via_gauss,
    gauss_residual,
    mean_curvature,
    second_fundamental_form,
)

__all__ = [
    "ImmersionField",
    "MeanCurvature",
    "SecondFundamentalForm",
    "chen_inequality_check",
    "curvature_via_gauss",
    "equality_structure_check",
    "gauss_residual",
    "ideality_check",
    "mean_curvature",
    "point_ideality",
    "second_fundamental_form",
]
