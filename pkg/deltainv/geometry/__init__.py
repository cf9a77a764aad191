"""Intrinsic Riemannian data at a point: metric, Christoffel symbols and curvature."""

from deltainv.geometry.curvature import (
    CurvatureTensor,
    PlaneSection,
    SymmetryResiduals,
    constant_curvature,
    constant_curvature_tensor,
    max_ricci,
    normalized_scalar_curvature,
    ricci_eigh,
    ricci_form,
    scalar_tau,
    sectional_curvature,
)
from deltainv.geometry.metric import (
    FactorMetric,
    MetricField,
    MetricSource,
    christoffel,
    laplacian,
    metric_at,
    orthonormal_frame,
    riemann_from_metric,
    volume_density,
)

__all__ = [
    "CurvatureTensor",
    "FactorMetric",
    "MetricField",
    "MetricSource",
    "PlaneSection",
    "SymmetryResiduals",
    "christoffel",
    "constant_curvature",
    "constant_curvature_tensor",
    "laplacian",
    "max_ricci",
    "metric_at",
    "normalized_scalar_curvature",
    "orthonormal_frame",
    "ricci_eigh",
    "ricci_form",
    "riemann_from_metric",
    "scalar_tau",
    "sectional_curvature",
    "volume_density",
]
