"""Immersions into Euclidean space and their extrinsic data.

An :class:`ImmersionField` is also a :class:`~deltainv.geometry.metric.MetricSource`
for its induced metric, so the intrinsic curvature path can be run on it directly
and compared against the Gauss equation.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from scipy import linalg

from deltainv.exceptions import ImmersionRankError
from deltainv.expr.model import Expression
from deltainv.expr.parser import parse_expression
from deltainv.geometry.curvature import CurvatureTensor
from deltainv.geometry.metric import DEFAULT_FD_STEP, as_domain, check_metric, orthonormal_frame, riemann_from_metric

logger = logging.getLogger(__name__)

RANK_TOL = 1e-8
NORMAL_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class ImmersionField:
    """An immersion ``f: U -> E^m`` given by ``m`` component expressions."""

    components: tuple[Expression, ...]
    variables: tuple[str, ...]
    domain: np.ndarray
    params: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "domain", as_domain(self.domain, len(self.variables)))
        object.__setattr__(self, "params", dict(self.params))
        if self.ambient_dim <= self.dim:
            raise ValueError(f"Ambient dimension {self.ambient_dim} must exceed dimension {self.dim}")

    @classmethod
    def from_strings(
        cls,
        components: Sequence[str],
        variables: Sequence[str],
        domain,
        params: Mapping[str, float] | None = None,
    ) -> "ImmersionField":
        params = dict(params or {})
        parsed = tuple(parse_expression(text, variables, tuple(params)) for text in components)
        return cls(parsed, tuple(variables), domain, params)

    @property
    def dim(self) -> int:
        return len(self.variables)

    @property
    def ambient_dim(self) -> int:
        return len(self.components)

    def jets(self, p: Sequence[float]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Position ``(m,)``, Jacobian ``(m, n)`` and Hessians ``(m, n, n)`` at ``p``."""
        n, m = self.dim, self.ambient_dim
        position = np.zeros(m)
        jacobian = np.zeros((m, n))
        hessians = np.zeros((m, n, n))
        for a, component in enumerate(self.components):
            jet = component.jet(p, self.params)
            position[a] = jet.value
            jacobian[a] = jet.gradient
            hessians[a] = jet.hessian
        return position, jacobian, hessians

    def check_rank(self, p: Sequence[float], jacobian: np.ndarray | None = None) -> None:
        if jacobian is None:
            _, jacobian, _ = self.jets(p)
        smallest = float(linalg.svdvals(jacobian)[-1])
        if smallest <= RANK_TOL:
            raise ImmersionRankError(p, smallest)

    def metric_jet(self, p: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
        """Induced metric ``J^T J`` and its exact first derivatives."""
        _, jacobian, hessians = self.jets(p)
        g = jacobian.T @ jacobian
        # dg[k, i, j] = sum_a H[a, k, i] J[a, j] + J[a, i] H[a, k, j]
        half = np.einsum("aki,aj->kij", hessians, jacobian)
        return g, half + half.transpose(0, 2, 1)


@dataclass(frozen=True, eq=False)
class SecondFundamentalForm:
    """Components ``h[i, j, r] = <h(e_i, e_j), xi_r>``.

    Parameters
    ----------
    components : np.ndarray
        ``(n, n, m - n)`` array, symmetrized in ``(i, j)`` on construction.
    tangent_frame : np.ndarray, optional
        Columns are the g-orthonormal tangent vectors in chart coordinates.
    normal_frame : np.ndarray, optional
        Columns are the orthonormal normal vectors in ambient coordinates.
    tangent_vectors : np.ndarray, optional
        The tangent frame pushed into ambient coordinates.
    """

    components: np.ndarray
    tangent_frame: np.ndarray | None = None
    normal_frame: np.ndarray | None = None
    tangent_vectors: np.ndarray | None = None

    def __post_init__(self):
        h = np.asarray(self.components, dtype=float)
        if h.ndim == 2:
            h = h[:, :, None]
        if h.ndim != 3 or h.shape[0] != h.shape[1]:
            raise ValueError(f"Second fundamental form must have shape (n, n, q), got {h.shape}")
        h = 0.5 * (h + h.transpose(1, 0, 2))
        object.__setattr__(self, "components", h)
        if self.tangent_frame is None:
            object.__setattr__(self, "tangent_frame", np.eye(h.shape[0]))

    @property
    def dim(self) -> int:
        return self.components.shape[0]

    @property
    def codim(self) -> int:
        return self.components.shape[2]

    def shape_operator(self, r: int) -> np.ndarray:
        """Matrix of ``A_{xi_r}`` in the tangent frame."""
        return self.components[:, :, r]

    def with_normal_rotation(self, q: np.ndarray) -> "SecondFundamentalForm":
        """Re-express in the normal frame ``normal_frame @ q``."""
        q = np.asarray(q, dtype=float)
        normal = None if self.normal_frame is None else self.normal_frame @ q
        return SecondFundamentalForm(
            self.components @ q, self.tangent_frame, normal, self.tangent_vectors
        )


@dataclass(frozen=True)
class MeanCurvature:
    vector: np.ndarray
    H2: float


def normal_frame(tangent: np.ndarray, position: np.ndarray | None = None) -> np.ndarray:
    """Orthonormal basis of the normal space of an orthonormal tangent frame.

    Ambient coordinate directions are taken in index order after removing tangential
    components, keeping the one with the largest remainder at each step. In
    codimension one the normal is oriented so that ``<nu, position> >= 0``.
    """
    m, n = tangent.shape
    chosen: list[np.ndarray] = []
    candidates = list(range(m))
    for _ in range(m - n):
        best_index, best_vector, best_norm = None, None, -1.0
        for a in candidates:
            v = np.zeros(m)
            v[a] = 1.0
            for _ in range(2):
                v = v - tangent @ (tangent.T @ v)
                for w in chosen:
                    v = v - (w @ v) * w
            norm = float(np.linalg.norm(v))
            if norm > best_norm + 1e-12:
                best_index, best_vector, best_norm = a, v, norm
        candidates.remove(best_index)
        chosen.append(best_vector / best_norm)
    frame = np.column_stack(chosen)
    if m - n == 1 and position is not None and float(frame[:, 0] @ position) < 0.0:
        frame = -frame
    return frame


def second_fundamental_form(f: ImmersionField, p: Sequence[float]) -> SecondFundamentalForm:
    """h at ``p`` from the exact ambient Hessians of the components.

    Raises
    ------
    ImmersionRankError
        If the Jacobian at ``p`` is rank deficient.
    """
    position, jacobian, hessians = f.jets(p)
    f.check_rank(p, jacobian)
    g = check_metric(jacobian.T @ jacobian, p)
    frame = orthonormal_frame(g)
    tangent = jacobian @ frame
    normals = normal_frame(tangent, position)
    leak = float(np.abs(tangent.T @ normals).max())
    if leak > NORMAL_TOL:
        logger.warning(f"Normal frame leaks {leak:.2e} into the tangent space at {list(p)}")
    h = np.einsum("aij,ik,jl,ar->klr", hessians, frame, frame, normals, optimize=True)
    return SecondFundamentalForm(h, frame, normals, tangent)


def mean_curvature(h: SecondFundamentalForm) -> MeanCurvature:
    """H^r = trace(h^r) / n and H2 = |H|^2."""
    vector = np.einsum("iir->r", h.components) / h.dim
    return MeanCurvature(vector=vector, H2=float(vector @ vector))


def curvature_via_gauss(h: SecondFundamentalForm, c: float = 0.0) -> CurvatureTensor:
    """Gauss equation ``R(X,Y;Z,W) = <h(X,W),h(Y,Z)> - <h(X,Z),h(Y,W)>`` plus the ambient ``c`` term."""
    comps = np.einsum("ilr,jkr->ijkl", h.components, h.components) - np.einsum(
        "ikr,jlr->ijkl", h.components, h.components
    )
    if c:
        eye = np.eye(h.dim)
        comps = comps + c * (np.einsum("il,jk->ijkl", eye, eye) - np.einsum("ik,jl->ijkl", eye, eye))
    return CurvatureTensor(comps, frame=h.tangent_frame)


def gauss_residual(f: ImmersionField, p: Sequence[float], fd_step: float = DEFAULT_FD_STEP) -> float:
    """Largest componentwise gap between the intrinsic and the Gauss-equation tensors."""
    intrinsic = riemann_from_metric(f, p, fd_step)
    extrinsic = curvature_via_gauss(second_fundamental_form(f, p), 0.0)
    return float(np.abs(intrinsic.components - extrinsic.components).max())
