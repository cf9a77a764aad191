"""Theorem-level applications and the built-in manifold catalog."""

from deltainv.applications.catalog import DEFAULT_CATALOG, BuiltinCatalog, ManifoldCatalog
from deltainv.applications.obstructions import lagrangian_obstruction, minimal_obstruction
from deltainv.applications.records import ManifoldRecord, PointData, RecordKind, Topology, WarpedMetric, WarpedSpec
from deltainv.applications.spectral import (
    average_bound_test,
    best_living_test,
    rigidity_bound_check,
    spectral_bound_check,
)
from deltainv.applications.warped import laplacian_of_warping, warped_inequality_check, warped_obstruction_flags

__all__ = [
    "DEFAULT_CATALOG",
    "BuiltinCatalog",
    "ManifoldCatalog",
    "ManifoldRecord",
    "PointData",
    "RecordKind",
    "Topology",
    "WarpedMetric",
    "WarpedSpec",
    "average_bound_test",
    "best_living_test",
    "lagrangian_obstruction",
    "laplacian_of_warping",
    "minimal_obstruction",
    "rigidity_bound_check",
    "spectral_bound_check",
    "warped_inequality_check",
    "warped_obstruction_flags",
]
