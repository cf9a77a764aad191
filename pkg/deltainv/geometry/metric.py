"""Metric sources, Christoffel symbols and curvature from a metric.

Anything that can report ``g`` and its first derivatives at a chart point satisfies
:class:`MetricSource`: an abstract :class:`MetricField`, the induced metric of an
immersion, or a warped product. Curvature is computed from exact first derivatives
of ``g`` plus one layer of central finite differences on the Christoffel symbols.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import ClassVar, Mapping, Protocol, Sequence, runtime_checkable

import numpy as np
from scipy import linalg

from deltainv.exceptions import SingularMetricError, StencilError
from deltainv.expr.model import Expression
from deltainv.expr.parser import parse_expression
from deltainv.geometry.curvature import CurvatureTensor

logger = logging.getLogger(__name__)

MIN_EIGENVALUE = 1e-12
MAX_CONDITION = 1e12
DEFAULT_FD_STEP = 1e-4
#: Largest pair symmetry defect accepted from the finite-difference tensor before projection.
PAIR_SYMMETRY_TOL = 1e-9


@runtime_checkable
class MetricSource(Protocol):
    """The seam between curvature code and the many ways of specifying a metric."""

    @property
    def dim(self) -> int: ...

    @property
    def domain(self) -> np.ndarray: ...

    def metric_jet(self, p: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
        """Return ``(g, dg)`` with ``dg[k, i, j] = d_k g_ij``."""
        ...


def as_domain(domain, dim: int | None = None) -> np.ndarray:
    """Validate a coordinate box given as ``[[lo, hi], ...]``."""
    box = np.asarray(domain, dtype=float)
    if box.ndim != 2 or box.shape[1] != 2:
        raise ValueError(f"Domain must be a list of [lo, hi] pairs, got shape {box.shape}")
    if dim is not None and box.shape[0] != dim:
        raise ValueError(f"Domain has {box.shape[0]} intervals for dimension {dim}")
    if np.any(box[:, 0] >= box[:, 1]):
        raise ValueError("empty box: every interval needs lo < hi")
    return box


@dataclass(frozen=True, eq=False)
class MetricField:
    """A metric given entrywise by expressions in the chart coordinates.

    Parameters
    ----------
    entries : tuple of tuple of Expression
        Full ``n x n`` matrix; only the upper triangle is evaluated, so the
        field is symmetric by construction.
    domain : np.ndarray
        Coordinate box, ``n x 2``.
    params : Mapping[str, float]
        Bound values of the expression parameters.
    """

    entries: tuple[tuple[Expression, ...], ...]
    domain: np.ndarray
    params: Mapping[str, float] = field(default_factory=dict)

    min_dim: ClassVar[int] = 2

    def __post_init__(self):
        n = len(self.entries)
        if n < self.min_dim or any(len(row) != n for row in self.entries):
            raise ValueError(f"Metric entries must form a square matrix of size at least {self.min_dim}")
        object.__setattr__(self, "domain", as_domain(self.domain, n))
        object.__setattr__(self, "params", dict(self.params))

    @classmethod
    def from_strings(
        cls,
        entries: Sequence[Sequence[str]],
        variables: Sequence[str],
        domain,
        params: Mapping[str, float] | None = None,
    ) -> "MetricField":
        params = dict(params or {})
        parsed = tuple(
            tuple(parse_expression(text, variables, tuple(params)) for text in row) for row in entries
        )
        return cls(parsed, domain, params)

    @property
    def dim(self) -> int:
        return len(self.entries)

    def metric_jet(self, p: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
        n = self.dim
        g = np.zeros((n, n))
        dg = np.zeros((n, n, n))
        for i in range(n):
            for j in range(i, n):
                jet = self.entries[i][j].jet(p, self.params)
                g[i, j] = g[j, i] = jet.value
                dg[:, i, j] = dg[:, j, i] = jet.gradient
        return g, dg


class FactorMetric(MetricField):
    """A :class:`MetricField` that may be one-dimensional, used for warped-product factors."""

    min_dim: ClassVar[int] = 1


def check_metric(g: np.ndarray, p: Sequence[float]) -> np.ndarray:
    """Return ``g`` after checking it is safely positive definite."""
    eigenvalues = linalg.eigvalsh(g)
    smallest, largest = float(eigenvalues[0]), float(eigenvalues[-1])
    if smallest <= MIN_EIGENVALUE:
        raise SingularMetricError(p, smallest)
    condition = largest / smallest
    if condition > MAX_CONDITION:
        raise SingularMetricError(p, smallest, condition)
    return g


def metric_at(source: MetricSource, p: Sequence[float]) -> np.ndarray:
    g, _ = source.metric_jet(p)
    return check_metric(g, p)


def christoffel(source: MetricSource, p: Sequence[float]) -> np.ndarray:
    """Levi-Civita symbols ``gamma[k, i, j] = G^k_ij``, symmetric in ``(i, j)``.

    Raises
    ------
    SingularMetricError
        If ``g(p)`` is not safely positive definite.
    """
    g, dg = source.metric_jet(p)
    check_metric(g, p)
    ginv = linalg.inv(g)
    # lowered[l, i, j] = d_i g_jl + d_j g_il - d_l g_ij
    lowered = dg.transpose(2, 0, 1) + dg.transpose(2, 1, 0) - dg
    gamma = 0.5 * np.einsum("kl,lij->kij", ginv, lowered)
    return 0.5 * (gamma + gamma.transpose(0, 2, 1))


def orthonormal_frame(g: np.ndarray) -> np.ndarray:
    """Modified Gram-Schmidt of the coordinate directions against ``g``.

    Returns a matrix whose columns are g-orthonormal vectors in chart coordinates.
    """
    n = g.shape[0]
    frame = np.zeros((n, n))
    for i in range(n):
        v = np.zeros(n)
        v[i] = 1.0
        for j in range(i):
            v = v - (frame[:, j] @ g @ v) * frame[:, j]
        frame[:, i] = v / np.sqrt(v @ g @ v)
    return frame


def fd_steps(domain: np.ndarray, fd_step: float = DEFAULT_FD_STEP) -> np.ndarray:
    """Per-axis finite-difference steps scaled by the box width."""
    return fd_step * (domain[:, 1] - domain[:, 0])


def coordinate_riemann(source: MetricSource, p: Sequence[float], fd_step: float = DEFAULT_FD_STEP) -> np.ndarray:
    """Fully lowered coordinate tensor ``R_abcd`` in the package convention.

    The Christoffel symbols are differentiated by the fourth-order central stencil with
    a step scaled to the coordinate box; the stencil reaches two steps out and must stay
    inside the box.
    """
    p = np.asarray(p, dtype=float)
    n = source.dim
    steps = fd_steps(source.domain, fd_step)
    lo, hi = source.domain[:, 0], source.domain[:, 1]
    if np.any(p - 2 * steps <= lo) or np.any(p + 2 * steps >= hi):
        raise StencilError(p, float(2 * steps.max()))

    gamma = christoffel(source, p)
    d_gamma = np.zeros((n, n, n, n))
    for m in range(n):
        shift = np.zeros(n)
        shift[m] = steps[m]
        near = christoffel(source, p + shift) - christoffel(source, p - shift)
        far = christoffel(source, p + 2 * shift) - christoffel(source, p - 2 * shift)
        d_gamma[m] = (8.0 * near - far) / (12.0 * steps[m])

    # up[r, s, m, v] = R^r_{s m v} = d_m G^r_vs - d_v G^r_ms + G^r_ml G^l_vs - G^r_vl G^l_ms
    up = (
        np.einsum("mrvs->rsmv", d_gamma)
        - np.einsum("vrms->rsmv", d_gamma)
        + np.einsum("rml,lvs->rsmv", gamma, gamma)
        - np.einsum("rvl,lms->rsmv", gamma, gamma)
    )
    g, _ = source.metric_jet(p)
    lowered = np.einsum("ar,rsmv->asmv", g, up)
    # swap the last pair so that K(e_i ^ e_j) = R[i, j, j, i]
    return lowered.transpose(0, 1, 3, 2)


def riemann_from_metric(source: MetricSource, p: Sequence[float], fd_step: float = DEFAULT_FD_STEP) -> CurvatureTensor:
    """Curvature tensor of ``source`` at ``p`` in its Gram-Schmidt orthonormal frame.

    The symmetry defects of the finite-difference array are kept on the tensor as
    ``input_residuals``; a pair symmetry defect above ``PAIR_SYMMETRY_TOL`` is logged.

    Raises
    ------
    SingularMetricError
        If the metric is degenerate at ``p``.
    StencilError
        If ``p`` is too close to the domain boundary for the finite-difference stencil.
    """
    coords = coordinate_riemann(source, p, fd_step)
    frame = orthonormal_frame(metric_at(source, p))
    comps = np.einsum("ijkl,ia,jb,kc,ld->abcd", coords, frame, frame, frame, frame, optimize=True)
    tensor = CurvatureTensor(comps, frame=frame)
    where = list(np.round(p, 6))
    pair = tensor.pair_symmetry_residual()
    bianchi = tensor.bianchi_residual()
    logger.debug(f"Curvature at {where}: pair symmetry residual {pair:.2e}, bianchi residual {bianchi:.2e}")
    if pair > PAIR_SYMMETRY_TOL:
        logger.warning(f"Curvature at {where} violates pair symmetry by {pair:.2e} before projection")
    return tensor


def laplacian(source: MetricSource, f: Expression, p: Sequence[float], params: Mapping[str, float] | None = None) -> float:
    """Geometer's Laplacian ``-g^ij (d_i d_j f - G^k_ij d_k f)`` of ``f`` at ``p``."""
    g, _ = source.metric_jet(p)
    check_metric(g, p)
    jet = f.jet(p, params)
    gamma = christoffel(source, p)
    hessian = jet.hessian - np.einsum("kij,k->ij", gamma, jet.gradient)
    return float(-np.sum(linalg.inv(g) * hessian))


def volume_density(source: MetricSource, p: Sequence[float]) -> float:
    """Riemannian volume density sqrt(det g) at ``p``."""
    g, _ = source.metric_jet(p)
    return float(np.sqrt(linalg.det(g)))
