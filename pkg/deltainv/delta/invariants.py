"""delta(n_1, ..., n_k), its normalization and the maximal normalized invariant.

``delta(t) = tau - inf sum_j tau(L_j)`` over mutually orthogonal subspaces with
``dim L_j = n_j``. Values are certified for the empty tuple, for ``t = (n-1)``
(largest Ricci eigenvalue) and for constant-curvature tensors; otherwise they come
from the restarted Givens descent in :mod:`deltainv.delta.optimizer` and are lower
bounds on the true invariant.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from deltainv.combinatorics import enumerate_tuples
from deltainv.config import DEFAULT_OPTIONS, DEFAULT_TOLERANCES, OptimizerOptions
from deltainv.custom_types import CheckResult, TupleSpec
from deltainv.delta.optimizer import minimize_block_scalar_curvature
from deltainv.exceptions import DimensionCapError, InvalidTupleError, NonOrthonormalError
from deltainv.geometry.curvature import CurvatureTensor, constant_curvature, ricci_eigh, scalar_tau

logger = logging.getLogger(__name__)

FRAME_TOL = 1e-9
CONSTANT_CURVATURE_TOL = 1e-9
TIE_SLACK = 1e-12


@dataclass(frozen=True, eq=False)
class SubspaceTuple:
    """An orthonormal frame whose leading column blocks span ``L_1, ..., L_k``."""

    frame: np.ndarray
    tuple_spec: TupleSpec

    def __post_init__(self):
        frame = np.asarray(self.frame, dtype=float)
        n = self.tuple_spec.n
        if frame.shape != (n, n):
            raise InvalidTupleError(self.tuple_spec.parts, n, f"frame has shape {frame.shape}")
        residual = float(np.abs(frame.T @ frame - np.eye(n)).max())
        if residual > FRAME_TOL:
            raise NonOrthonormalError(residual, FRAME_TOL)
        object.__setattr__(self, "frame", frame)

    @property
    def blocks(self) -> list[range]:
        return self.tuple_spec.blocks()

    def basis(self, block: int) -> np.ndarray:
        """Columns spanning ``L_block``."""
        return self.frame[:, list(self.blocks[block])]

    def trailing_basis(self) -> np.ndarray:
        return self.frame[:, list(self.tuple_spec.trailing())]


@dataclass(frozen=True, eq=False)
class DeltaResult:
    tuple_spec: TupleSpec
    tau: float
    inf_sum: float
    delta: float
    coeff_c: float
    normalized: float
    minimizer: SubspaceTuple
    restarts_used: int
    certified: bool
    converged: bool = True
    method: str = "closed-form"

    @property
    def n(self) -> int:
        return self.tuple_spec.n


def tau_of_subspace(r: CurvatureTensor, basis) -> float:
    """Scalar curvature ``sum_{a<b} K(e_a ^ e_b)`` of the span of an orthonormal basis.

    Parameters
    ----------
    basis : array-like
        Either a list of vectors or an ``n x r`` matrix with the vectors as columns.
    """
    b = np.asarray(basis, dtype=float)
    if b.ndim == 2 and b.shape[0] != r.dim:
        b = b.T
    if b.ndim != 2 or b.shape[0] != r.dim or b.shape[1] < 2:
        raise ValueError(f"Expected at least two vectors of length {r.dim}")
    residual = float(np.abs(b.T @ b - np.eye(b.shape[1])).max())
    if residual > FRAME_TOL:
        raise NonOrthonormalError(residual, FRAME_TOL)
    sectional = np.einsum("ijkl,ia,jb,kb,la->ab", r.components, b, b, b, b, optimize=True)
    return float(np.triu(sectional, 1).sum())


def normalizing_coefficient(n: int, t: TupleSpec) -> float:
    """``c(n_1..n_k) = n^2 (n + k - 1 - sum) / (2 (n + k - sum))``; n(n-1)/2 for the empty tuple."""
    if t.n != n:
        raise InvalidTupleError(t.parts, n, f"tuple was built for n={t.n}")
    if t.k == 0:
        return n * (n - 1) / 2.0
    denominator = n + t.k - t.total
    if denominator <= 0:
        raise InvalidTupleError(t.parts, n, "normalizing coefficient is undefined")
    return n * n * (n + t.k - 1 - t.total) / (2.0 * denominator)


def constant_curvature_delta(n: int, t: TupleSpec, c: float) -> float:
    """Closed form ``(c/2)(n(n-1) - sum n_j(n_j-1))`` for constant curvature ``c``."""
    return 0.5 * c * (n * (n - 1) - t.pair_count)


def _result(r, t, tau, inf_sum, frame, restarts, certified, converged=True, method="closed-form") -> DeltaResult:
    coeff = normalizing_coefficient(r.dim, t)
    delta = tau - inf_sum
    return DeltaResult(
        tuple_spec=t,
        tau=tau,
        inf_sum=inf_sum,
        delta=delta,
        coeff_c=coeff,
        normalized=delta / coeff,
        minimizer=SubspaceTuple(frame, t),
        restarts_used=restarts,
        certified=certified,
        converged=converged,
        method=method,
    )


def delta_invariant(r: CurvatureTensor, t: TupleSpec, opts: OptimizerOptions = DEFAULT_OPTIONS) -> DeltaResult:
    """delta(t) of ``r``.

    Raises
    ------
    InvalidTupleError
        If ``t`` does not belong to S(dim r).
    """
    n = r.dim
    if t.n != n:
        raise InvalidTupleError(t.parts, n, f"tuple was built for n={t.n}")
    tau = scalar_tau(r)
    if t.k == 0:
        return _result(r, t, tau, 0.0, np.eye(n), 0, True)

    if opts.closed_forms:
        c = constant_curvature(r, CONSTANT_CURVATURE_TOL)
        if c is not None:
            inf_sum = tau - constant_curvature_delta(n, t, c)
            return _result(r, t, tau, inf_sum, np.eye(n), 0, True, method="constant-curvature")
        if t.parts == (n - 1,):
            values, vectors = ricci_eigh(r)
            return _result(r, t, tau, tau - float(values[-1]), vectors, 0, True, method="ricci-eigen")

    outcome = minimize_block_scalar_curvature(np.asarray(r.components), t, opts)
    return _result(
        r,
        t,
        tau,
        outcome.value,
        outcome.frame,
        outcome.restarts_used,
        False,
        converged=outcome.converged,
        method="givens-descent",
    )


def delta_profile(
    r: CurvatureTensor, opts: OptimizerOptions = DEFAULT_OPTIONS, tuples: Sequence[TupleSpec] | None = None
) -> dict[TupleSpec, DeltaResult]:
    """DeltaResult for every tuple of S(n), in enumeration order."""
    tuples = enumerate_tuples(r.dim) if tuples is None else tuples
    return {t: delta_invariant(r, t, opts) for t in tuples}


def delta_hat0(
    r: CurvatureTensor,
    opts: OptimizerOptions = DEFAULT_OPTIONS,
    profile: Mapping[TupleSpec, DeltaResult] | None = None,
) -> tuple[float, TupleSpec]:
    """Maximal normalized invariant and its arg-max tuple.

    Ties go to the earlier tuple in enumeration order (smaller k, then lexicographic).

    Raises
    ------
    DimensionCapError
        If ``dim r`` exceeds ``opts.dim_cap``.
    """
    if r.dim > opts.dim_cap:
        raise DimensionCapError(r.dim, opts.dim_cap)
    profile = profile if profile is not None else delta_profile(r, opts)
    best_value, best_tuple = None, None
    for t in sorted(profile, key=TupleSpec.sort_key):
        value = profile[t].normalized
        if best_value is None or value > best_value + TIE_SLACK:
            best_value, best_tuple = value, t
    return float(best_value), best_tuple


def maximum_principle_check(
    results: Mapping[TupleSpec, DeltaResult], t_equal: TupleSpec, tol: float = DEFAULT_TOLERANCES.margin
) -> CheckResult:
    """Check that Delta(t_equal) dominates Delta(t) for every t in S(n).

    Raises
    ------
    InvalidTupleError
        If ``results`` does not cover all of S(n).
    """
    n = t_equal.n
    expected = set(enumerate_tuples(n))
    missing = expected - set(results)
    if missing:
        labels = ", ".join(t.label() for t in sorted(missing, key=TupleSpec.sort_key))
        raise InvalidTupleError(t_equal.parts, n, f"results are missing tuples {labels}")
    anchor = results[t_equal].normalized
    worst_tuple, worst_gap = t_equal, 0.0
    for t in sorted(expected, key=TupleSpec.sort_key):
        gap = results[t].normalized - anchor
        if gap > worst_gap:
            worst_tuple, worst_gap = t, gap
    return CheckResult.from_margin(
        "maximum-principle",
        lhs=results[worst_tuple].normalized,
        rhs=anchor,
        tolerance=tol,
        tuple_spec=t_equal,
        certified=all(res.certified for res in results.values()),
        details={"max_violation": worst_gap, "violating_tuple": list(worst_tuple.parts)},
    )
