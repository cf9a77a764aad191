"""Point-level curvature tensors and the curvature quantities built on them.

Index convention: ``R[i, j, k, l] = R(e_i, e_j; e_k, e_l)`` with sectional curvature
``K(e_i ^ e_j) = R[i, j, j, i]``. The unit sphere then has K = +1 and the Gauss
equation reads ``R(X,Y;Z,W) = <h(X,W), h(Y,Z)> - <h(X,Z), h(Y,W)>``. A space of
constant curvature c has ``R[i, j, k, l] = c (d_il d_jk - d_ik d_jl)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cache

import numpy as np
from scipy import linalg

from deltainv.exceptions import NonOrthonormalError

ORTHONORMAL_TOL = 1e-10


@cache
def _pairs(n: int) -> tuple[tuple[int, int], ...]:
    return tuple(itertools.combinations(range(n), 2))


def _pair_index(n: int) -> tuple[np.ndarray, np.ndarray]:
    pairs = _pairs(n)
    first = np.array([p[0] for p in pairs], dtype=int)
    second = np.array([p[1] for p in pairs], dtype=int)
    return first[:, None], second[:, None]


def _bivector_matrix(components: np.ndarray) -> np.ndarray:
    """Project a 4-index array onto the bivector matrix of pairs ``i < j``.

    Averages over the four antisymmetric sign patterns and symmetrizes the result, so
    antisymmetry and pair symmetry hold exactly for the tensor it rebuilds.
    """
    i, j = _pair_index(components.shape[0])
    k, l = i.T, j.T
    block = (components[i, j, k, l] - components[j, i, k, l] - components[i, j, l, k] + components[j, i, l, k]) / 4.0
    return 0.5 * (block + block.T)


def _expand(bivector: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros((n, n, n, n))
    i, j = _pair_index(n)
    k, l = i.T, j.T
    out[i, j, k, l] = bivector
    out[j, i, k, l] = -bivector
    out[i, j, l, k] = -bivector
    out[j, i, l, k] = bivector
    return out


@dataclass(frozen=True)
class SymmetryResiduals:
    """Largest violations of the algebraic symmetries by a raw 4-index array."""

    antisymmetry: float
    pair_symmetry: float

    @classmethod
    def of(cls, r: np.ndarray) -> "SymmetryResiduals":
        anti = max(np.abs(r + r.transpose(1, 0, 2, 3)).max(), np.abs(r + r.transpose(0, 1, 3, 2)).max())
        pair = np.abs(r - r.transpose(2, 3, 0, 1)).max()
        return cls(float(anti), float(pair))


@dataclass(frozen=True, eq=False)
class CurvatureTensor:
    """A Riemann curvature tensor in a g-orthonormal frame.

    Parameters
    ----------
    components : np.ndarray
        ``n x n x n x n`` array. It is projected onto the antisymmetric, pair
        symmetric part on construction.
    frame : np.ndarray, optional
        ``n x n`` matrix whose columns are the frame vectors in chart coordinates.
        Defaults to the identity.
    input_residuals : SymmetryResiduals, optional
        Symmetry defects of the data the tensor was built from. Measured on
        ``components`` before projection when not given.
    """

    components: np.ndarray
    frame: np.ndarray | None = None
    input_residuals: SymmetryResiduals | None = None
    bivector: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        comps = np.asarray(self.components, dtype=float)
        if comps.ndim != 4 or len(set(comps.shape)) != 1:
            raise ValueError(f"Curvature components must be n x n x n x n, got shape {comps.shape}")
        n = comps.shape[0]
        if n < 2:
            raise ValueError("Curvature tensors need dimension at least 2")
        residuals = SymmetryResiduals.of(comps) if self.input_residuals is None else self.input_residuals
        bivector = _bivector_matrix(comps)
        full = _expand(bivector, n)
        full.setflags(write=False)
        bivector.setflags(write=False)
        frame = np.eye(n) if self.frame is None else np.asarray(self.frame, dtype=float)
        object.__setattr__(self, "components", full)
        object.__setattr__(self, "bivector", bivector)
        object.__setattr__(self, "frame", frame)
        object.__setattr__(self, "input_residuals", residuals)

    @property
    def dim(self) -> int:
        return self.components.shape[0]

    def rotated(self, q: np.ndarray) -> "CurvatureTensor":
        """Express the tensor in the frame whose vectors are the columns of ``q``."""
        q = np.asarray(q, dtype=float)
        comps = np.einsum("ijkl,ia,jb,kc,ld->abcd", self.components, q, q, q, q, optimize=True)
        return CurvatureTensor(comps, frame=self.frame @ q, input_residuals=self.input_residuals)

    def sectional_matrix(self) -> np.ndarray:
        """``S[a, b] = K(e_a ^ e_b)`` in the current frame (zero diagonal)."""
        return np.einsum("abba->ab", self.components).copy()

    def antisymmetry_residual(self) -> float:
        """Antisymmetry defect of the input data; the stored components have none."""
        return self.input_residuals.antisymmetry

    def pair_symmetry_residual(self) -> float:
        """Pair symmetry defect of the input data; the stored components have none."""
        return self.input_residuals.pair_symmetry

    def bianchi_residual(self) -> float:
        r = self.components
        cyclic = r + r.transpose(1, 2, 0, 3) + r.transpose(2, 0, 1, 3)
        return float(np.abs(cyclic).max())

    def to_list(self) -> list:
        return self.components.tolist()


def constant_curvature_tensor(n: int, c: float) -> CurvatureTensor:
    """The tensor of a space of constant sectional curvature ``c``."""
    eye = np.eye(n)
    comps = c * (np.einsum("il,jk->ijkl", eye, eye) - np.einsum("ik,jl->ijkl", eye, eye))
    return CurvatureTensor(comps)


@dataclass(frozen=True, eq=False)
class PlaneSection:
    """A 2-plane given by two orthonormal vectors in frame coordinates."""

    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.u, dtype=float)
        v = np.asarray(self.v, dtype=float)
        residual = max(abs(u @ u - 1.0), abs(v @ v - 1.0), abs(u @ v))
        if residual > ORTHONORMAL_TOL:
            raise NonOrthonormalError(residual, ORTHONORMAL_TOL)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @classmethod
    def spanned_by(cls, a, b) -> "PlaneSection":
        """Orthonormalize two independent vectors into a plane section."""
        basis, _ = np.linalg.qr(np.column_stack([a, b]))
        return cls(basis[:, 0], basis[:, 1])


def sectional_curvature(r: CurvatureTensor, plane: PlaneSection) -> float:
    """K(plane) = R(u, v; v, u)."""
    return float(np.einsum("ijkl,i,j,k,l->", r.components, plane.u, plane.v, plane.v, plane.u))


def ricci_form(r: CurvatureTensor) -> np.ndarray:
    """Matrix Q with ``u^T Q u = Ric(u) = sum_j K(u ^ e_j)`` for unit u."""
    q = np.einsum("ijjl->il", r.components)
    return 0.5 * (q + q.T)


def ricci_eigh(r: CurvatureTensor) -> tuple[np.ndarray, np.ndarray]:
    """Ricci eigenvalues in ascending order with orthonormal eigenvectors as columns."""
    return linalg.eigh(ricci_form(r))


def max_ricci(r: CurvatureTensor) -> float:
    return float(ricci_eigh(r)[0][-1])


def scalar_tau(r: CurvatureTensor) -> float:
    """tau = sum over i < j of K(e_i ^ e_j); half the contracted scalar curvature."""
    return float(np.trace(ricci_form(r)) / 2.0)


def normalized_scalar_curvature(r: CurvatureTensor) -> float:
    """rho = 2 tau / (n (n - 1))."""
    n = r.dim
    return 2.0 * scalar_tau(r) / (n * (n - 1))


def constant_curvature(r: CurvatureTensor, tol: float = 1e-9) -> float | None:
    """Return c when ``r`` is the constant-curvature-c tensor within ``tol``, else None."""
    n = r.dim
    c = 2.0 * scalar_tau(r) / (n * (n - 1))
    residual = np.abs(r.components - constant_curvature_tensor(n, c).components).max()
    if residual <= tol * max(1.0, abs(c)):
        return float(c)
    return None
