"""Complex structure on C^n = R^2n, Lagrangian data and the Whitney sphere."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from deltainv.config import DEFAULT_TOLERANCES
from deltainv.exceptions import NotLagrangianError
from deltainv.extrinsic.immersion import ImmersionField, SecondFundamentalForm
from deltainv.geometry.metric import check_metric, orthonormal_frame

logger = logging.getLogger(__name__)

CUBIC_SYMMETRY_TOL = 1e-6
WHITNEY_RADIUS = 2.0


@dataclass(frozen=True)
class ComplexAmbient:
    """The complex space form of complex dimension ``n`` and holomorphic curvature ``4c``.

    Coordinates are ordered ``(x_1..x_n, y_1..y_n)`` and ``J(x, y) = (-y, x)``.
    """

    n: int
    c: float = 0.0

    @property
    def J(self) -> np.ndarray:
        eye = np.eye(self.n)
        zero = np.zeros((self.n, self.n))
        return np.block([[zero, -eye], [eye, zero]])

    @property
    def holomorphic_curvature(self) -> float:
        return 4.0 * self.c


def complex_structure(m: int) -> np.ndarray:
    if m % 2:
        raise ValueError(f"Ambient dimension {m} is odd; a complex structure needs an even dimension")
    return ComplexAmbient(m // 2).J


def _tangent(f: ImmersionField, p: Sequence[float]):
    _, jacobian, hessians = f.jets(p)
    f.check_rank(p, jacobian)
    frame = orthonormal_frame(check_metric(jacobian.T @ jacobian, p))
    return frame, jacobian @ frame, hessians


def lagrangian_check(f: ImmersionField, p: Sequence[float]) -> float:
    """max |omega(df e_i, df e_j)| over a g-orthonormal frame, ``omega(v, w) = <J v, w>``.

    Raises
    ------
    ValueError
        If the ambient dimension is odd.
    """
    J = complex_structure(f.ambient_dim)
    _, tangent, _ = _tangent(f, p)
    omega = (J @ tangent).T @ tangent
    return float(np.abs(omega).max())


@dataclass(frozen=True, eq=False)
class LagrangianData:
    """Second fundamental form of a Lagrangian point in the normal frame ``J e_r``.

    ``cubic[i, j, r] = <h(e_i, e_j), J e_r>`` is totally symmetric for a Lagrangian.
    """

    sff: SecondFundamentalForm
    symplectic_residual: float = 0.0
    c: float = 0.0

    @classmethod
    def from_cubic(cls, cubic, c: float = 0.0) -> "LagrangianData":
        """Point-level data from a cubic form array ``(n, n, n)``."""
        cubic = np.asarray(cubic, dtype=float)
        if cubic.ndim != 3 or len(set(cubic.shape)) != 1:
            raise ValueError(f"Cubic form must have shape (n, n, n), got {cubic.shape}")
        return cls(SecondFundamentalForm(cubic), 0.0, c)

    @property
    def cubic(self) -> np.ndarray:
        return self.sff.components

    @property
    def dim(self) -> int:
        return self.sff.dim

    def cubic_symmetry_residual(self) -> float:
        c = self.cubic
        return float(
            max(
                np.abs(c - c.transpose(0, 2, 1)).max(),
                np.abs(c - c.transpose(2, 1, 0)).max(),
            )
        )


def lagrangian_data(
    f: ImmersionField, p: Sequence[float], tol: float = DEFAULT_TOLERANCES.lagrangian
) -> LagrangianData:
    """Lagrangian data at ``p`` with normal frame ``J df(e_r)``.

    Raises
    ------
    NotLagrangianError
        If the symplectic residual at ``p`` exceeds ``tol``.
    """
    J = complex_structure(f.ambient_dim)
    frame, tangent, hessians = _tangent(f, p)
    residual = float(np.abs((J @ tangent).T @ tangent).max())
    if residual > tol:
        raise NotLagrangianError(residual, tol)
    normals = J @ tangent
    h = np.einsum("aij,ik,jl,ar->klr", hessians, frame, frame, normals, optimize=True)
    data = LagrangianData(SecondFundamentalForm(h, frame, normals, tangent), residual)
    sym = data.cubic_symmetry_residual()
    if sym > CUBIC_SYMMETRY_TOL:
        logger.warning(f"Cubic form asymmetry {sym:.2e} at {list(p)}")
    return data


def whitney_immersion(n: int, radius: float = WHITNEY_RADIUS) -> ImmersionField:
    """Whitney sphere ``w = (1 + i y0) / (1 + y0^2) (y_1..y_n)`` in a stereographic chart.

    The chart is inverse stereographic projection with ``y0(0) = -1``, so the origin
    maps to the double point ``w = 0``. With ``s = |x|^2`` the components simplify to
    ``Re w_j = x_j (s + 1) / (s^2 + 1)`` and ``Im w_j = x_j (s - 1) / (s^2 + 1)``.
    """
    if n < 2:
        raise ValueError(f"Whitney sphere needs n >= 2, got {n}")
    variables = tuple(f"x{j}" for j in range(1, n + 1))
    s = "(" + " + ".join(f"{v}^2" for v in variables) + ")"
    real = [f"{v}*({s} + 1)/({s}^2 + 1)" for v in variables]
    imag = [f"{v}*({s} - 1)/({s}^2 + 1)" for v in variables]
    domain = [[-radius, radius]] * n
    return ImmersionField.from_strings(real + imag, variables, domain)
