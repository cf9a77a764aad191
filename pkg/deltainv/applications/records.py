"""Manifold records: geometric data plus the closed-form metadata theorem checks consume.

Metadata such as ``lambda1``, topology flags and homogeneity are asserted by the
record's author (catalog or spec file) and never inferred from the geometry.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Sequence

import numpy as np

from deltainv.exceptions import EvaluationDomainError, MissingMetadataError
from deltainv.expr.model import Expression
from deltainv.extrinsic.immersion import (
    ImmersionField,
    SecondFundamentalForm,
    curvature_via_gauss,
    second_fundamental_form,
)
from deltainv.geometry.curvature import CurvatureTensor
from deltainv.geometry.metric import DEFAULT_FD_STEP, FactorMetric, MetricField, MetricSource, riemann_from_metric

logger = logging.getLogger(__name__)


class RecordKind(str, Enum):
    IMMERSION = "immersion"
    METRIC = "metric"
    WARPED = "warped"
    POINT_DATA = "point-data"


@dataclass(frozen=True)
class Topology:
    """Asserted topology flags; ``None`` means the record makes no claim."""

    b1_zero: bool | None = None
    finite_pi1: bool | None = None

    @property
    def asserted(self) -> bool:
        return self.b1_zero is not None or self.finite_pi1 is not None

    @property
    def lagrangian_hypothesis(self) -> bool:
        """Null first Betti number or finite fundamental group."""
        return bool(self.b1_zero) or bool(self.finite_pi1)

    def __iter__(self):
        yield self.b1_zero
        yield self.finite_pi1

    def to_tuple(self):
        return (self.b1_zero, self.finite_pi1)


@dataclass(frozen=True, eq=False)
class WarpedSpec:
    """``N1 x_f N2``: base and fiber metrics and a warping function on the base.

    Chart points of the product list the base coordinates first.
    """

    base: FactorMetric
    fiber: FactorMetric
    warping: Expression
    compact_base: bool = False

    def __post_init__(self):
        if self.warping.dim != self.base.dim:
            raise ValueError(f"Warping function has {self.warping.dim} variables, base has dimension {self.base.dim}")

    @property
    def n1(self) -> int:
        return self.base.dim

    @property
    def n2(self) -> int:
        return self.fiber.dim

    @property
    def dim(self) -> int:
        return self.n1 + self.n2

    @property
    def domain(self) -> np.ndarray:
        return np.vstack([self.base.domain, self.fiber.domain])

    def split(self, p: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
        p = np.asarray(p, dtype=float)
        return p[: self.n1], p[self.n1 :]

    def warping_value(self, x: Sequence[float]) -> float:
        """``f(x)`` at a base point.

        Raises
        ------
        EvaluationDomainError
            If ``f(x) <= 0``.
        """
        value = self.warping.value(x, self.base.params)
        if value <= 0.0:
            raise EvaluationDomainError("warping", value)
        return value

    def metric(self) -> "WarpedMetric":
        return WarpedMetric(self)


@dataclass(frozen=True, eq=False)
class WarpedMetric:
    """:class:`~deltainv.geometry.metric.MetricSource` of ``g1 + f^2 g2``."""

    spec: WarpedSpec

    @property
    def dim(self) -> int:
        return self.spec.dim

    @property
    def domain(self) -> np.ndarray:
        return self.spec.domain

    def metric_jet(self, p: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
        w = self.spec
        x, y = w.split(p)
        n1, n = w.n1, w.dim
        g1, dg1 = w.base.metric_jet(x)
        g2, dg2 = w.fiber.metric_jet(y)
        f = w.warping.jet(x, w.base.params)
        g = np.zeros((n, n))
        dg = np.zeros((n, n, n))
        g[:n1, :n1] = g1
        g[n1:, n1:] = f.value**2 * g2
        dg[:n1, :n1, :n1] = dg1
        dg[:n1, n1:, n1:] = 2.0 * f.value * np.einsum("k,ij->kij", f.gradient, g2)
        dg[n1:, n1:, n1:] = f.value**2 * dg2
        return g, dg


@dataclass(frozen=True, eq=False)
class PointData:
    """Explicit curvature and/or second fundamental form at a single point."""

    curvature: CurvatureTensor | None = None
    h: SecondFundamentalForm | None = None
    c: float = 0.0

    def __post_init__(self):
        if self.curvature is None and self.h is None:
            raise ValueError("Point data needs a curvature tensor or a second fundamental form")
        if self.curvature is not None and self.h is not None and self.curvature.dim != self.h.dim:
            raise ValueError(f"Curvature has dimension {self.curvature.dim}, h has dimension {self.h.dim}")

    @property
    def dim(self) -> int:
        return self.curvature.dim if self.curvature is not None else self.h.dim

    def tensor(self) -> CurvatureTensor:
        """The given curvature, else the Gauss-equation tensor of ``h`` in the space form ``c``."""
        if self.curvature is not None:
            return self.curvature
        return curvature_via_gauss(self.h, self.c)


@dataclass(frozen=True, eq=False)
class ManifoldRecord:
    """One manifold as the checks see it.

    Exactly one of ``immersion``, ``metric``, ``warped`` or ``point_data`` carries the
    geometry, except that a warped record may also carry an immersion realizing it.
    """

    name: str
    kind: RecordKind
    immersion: ImmersionField | None = None
    metric: MetricField | None = None
    warped: WarpedSpec | None = None
    point_data: PointData | None = None
    lambda1: float | None = None
    volume: float | None = None
    topology: Topology = field(default_factory=Topology)
    homogeneous: bool = False
    ambient_curvature: float = 0.0
    description: str = ""

    def __post_init__(self):
        object.__setattr__(self, "kind", RecordKind(self.kind))
        required = {
            RecordKind.IMMERSION: self.immersion,
            RecordKind.METRIC: self.metric,
            RecordKind.WARPED: self.warped,
            RecordKind.POINT_DATA: self.point_data,
        }[self.kind]
        if required is None:
            raise ValueError(f"Record '{self.name}' of kind {self.kind.value} has no {self.kind.value} data")
        if self.lambda1 is not None and self.lambda1 <= 0:
            raise ValueError(f"lambda1 must be positive, got {self.lambda1}")
        if self.volume is not None and self.volume <= 0:
            raise ValueError(f"volume must be positive, got {self.volume}")

    @property
    def dim(self) -> int:
        if self.kind is RecordKind.POINT_DATA:
            return self.point_data.dim
        return self.metric_source.dim

    @property
    def metric_source(self) -> MetricSource | None:
        """Where intrinsic curvature comes from; ``None`` for point data."""
        if self.kind is RecordKind.IMMERSION:
            return self.immersion
        if self.kind is RecordKind.METRIC:
            return self.metric
        if self.kind is RecordKind.WARPED:
            return self.warped.metric()
        return None

    @property
    def domain(self) -> np.ndarray | None:
        source = self.metric_source
        return None if source is None else source.domain

    def curvature_at(self, p: Sequence[float] | None = None, fd_step: float = DEFAULT_FD_STEP) -> CurvatureTensor:
        """Curvature tensor at chart point ``p``.

        Immersions go through the Gauss equation with exact jets; abstract and warped
        metrics through :func:`~deltainv.geometry.metric.riemann_from_metric`. Point
        data ignores ``p``.
        """
        if self.kind is RecordKind.POINT_DATA:
            return self.point_data.tensor()
        if self.kind is RecordKind.IMMERSION:
            return curvature_via_gauss(second_fundamental_form(self.immersion, p), self.ambient_curvature)
        return riemann_from_metric(self.metric_source, p, fd_step)

    def require(self, name: str) -> Any:
        """Return attribute ``name`` or raise if the record does not carry it.

        Raises
        ------
        MissingMetadataError
            If the attribute is ``None``.
        """
        value = getattr(self, name)
        if value is None:
            raise MissingMetadataError(self.name, name)
        return value

    def summary(self) -> dict[str, Any]:
        """Flat description used by ``catalog list``."""
        return {
            "name": self.name,
            "kind": self.kind.value,
            "dim": self.dim,
            "ambient_dim": self.immersion.ambient_dim if self.immersion is not None else None,
            "lambda1": self.lambda1,
            "volume": self.volume,
            "homogeneous": self.homogeneous,
            "b1_zero": self.topology.b1_zero,
            "finite_pi1": self.topology.finite_pi1,
            "description": self.description,
        }
