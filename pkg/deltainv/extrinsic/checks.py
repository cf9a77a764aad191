"""Chen's fundamental inequality, ideality and the equality-case block structure."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from deltainv.combinatorics import enumerate_tuples
from deltainv.config import DEFAULT_OPTIONS, DEFAULT_TOLERANCES, OptimizerOptions
from deltainv.custom_types import CheckResult, TupleSpec
from deltainv.delta.invariants import (
    DeltaResult,
    SubspaceTuple,
    delta_hat0,
    delta_profile,
    maximum_principle_check,
    normalizing_coefficient,
)
from deltainv.exceptions import InvalidTupleError
from deltainv.extrinsic.immersion import (
    ImmersionField,
    SecondFundamentalForm,
    curvature_via_gauss,
    mean_curvature,
    second_fundamental_form,
)

logger = logging.getLogger(__name__)


def space_form_term(n: int, t: TupleSpec, c: float) -> float:
    """``(1/2)(n(n-1) - sum n_j(n_j-1)) c``, the ambient curvature part of the bound."""
    return 0.5 * (n * (n - 1) - t.pair_count) * c


def chen_inequality_check(
    d: DeltaResult, H2: float, t: TupleSpec, c: float = 0.0, tol: float = DEFAULT_TOLERANCES.margin
) -> CheckResult:
    """delta(t) <= c(t) H^2 + (1/2)(n(n-1) - sum n_j(n_j-1)) c.

    Raises
    ------
    InvalidTupleError
        If ``d`` was computed for another tuple.
    """
    if d.tuple_spec != t:
        raise InvalidTupleError(t.parts, t.n, f"result belongs to {d.tuple_spec.label()}")
    rhs = normalizing_coefficient(t.n, t) * H2 + space_form_term(t.n, t, c)
    return CheckResult.from_margin(
        "chen",
        lhs=d.delta,
        rhs=rhs,
        tolerance=tol,
        tuple_spec=t,
        certified=d.certified,
        details={"H2": H2, "ambient_curvature": c, "delta": d.delta, "normalized": d.normalized},
    )


def equality_tuples(
    profile: dict[TupleSpec, DeltaResult], H2: float, tol: float = DEFAULT_TOLERANCES.margin
) -> list[TupleSpec]:
    """Tuples at which H^2 = Delta(t) within ``tol``; any hit makes the point ideal."""
    return [t for t, res in profile.items() if abs(H2 - res.normalized) <= tol]


@dataclass(frozen=True)
class PointIdeality:
    """Ideality data at one point."""

    H2: float
    dhat0: float
    argmax: TupleSpec
    result: CheckResult
    structure: CheckResult
    equal_at: tuple[TupleSpec, ...] = ()
    maximum_principle: CheckResult | None = None


@dataclass(frozen=True)
class IdealityReport:
    points: list[PointIdeality] = field(default_factory=list)
    tolerance: float = DEFAULT_TOLERANCES.margin

    @property
    def max_gap(self) -> float:
        return max((abs(pt.result.margin) for pt in self.points), default=0.0)

    @property
    def ideal(self) -> bool:
        return self.max_gap <= self.tolerance

    def to_check(self) -> CheckResult:
        """Residual record over the whole sample; it passes only when the immersion is ideal."""
        return CheckResult.from_residual(
            "ideal-immersion",
            self.max_gap,
            self.tolerance,
            verdict=self.ideal,
            details={"points": len(self.points), "equal_somewhere": any(pt.equal_at for pt in self.points)},
        )


def point_ideality(
    h: SecondFundamentalForm,
    opts: OptimizerOptions = DEFAULT_OPTIONS,
    tol: float = DEFAULT_TOLERANCES.margin,
    structure_tol: float = DEFAULT_TOLERANCES.structure,
) -> PointIdeality:
    """|H^2 - Dhat0| at one point, the arg-max tuple and its equality-structure residuals.

    When some tuple attains H^2 = Delta(t), the maximum principle is checked for it.
    """
    H2 = mean_curvature(h).H2
    tensor = curvature_via_gauss(h, 0.0)
    profile = delta_profile(tensor, opts)
    dhat, argmax = delta_hat0(tensor, opts, profile)
    margin = H2 - dhat
    result = CheckResult(
        check="ideality",
        passed=margin >= -tol,
        tolerance=tol,
        margin=margin,
        lhs=dhat,
        rhs=H2,
        tuple_spec=argmax,
        certified=profile[argmax].certified,
        verdict=abs(margin) <= tol,
        details={"gap": abs(margin)},
    )
    structure = equality_structure_check(h, profile[argmax].minimizer, argmax, structure_tol)
    equal_at = tuple(equality_tuples(profile, H2, tol))
    principle = maximum_principle_check(profile, equal_at[0], tol) if equal_at else None
    return PointIdeality(H2, dhat, argmax, result, structure, equal_at, principle)


def ideality_check(
    f: ImmersionField,
    sample: Sequence[Sequence[float]],
    opts: OptimizerOptions = DEFAULT_OPTIONS,
    tol: float = DEFAULT_TOLERANCES.margin,
) -> IdealityReport:
    """Flag the immersion ideal when H^2 = Dhat0 at every sampled point."""
    points = [point_ideality(second_fundamental_form(f, p), opts, tol) for p in sample]
    report = IdealityReport(points=points, tolerance=tol)
    logger.info(f"Ideality over {len(points)} points: max gap {report.max_gap:.3e}")
    return report


def equality_structure_check(
    h: SecondFundamentalForm, s: SubspaceTuple, t: TupleSpec, tol: float = DEFAULT_TOLERANCES.structure
) -> CheckResult:
    """Block form of the shape operators in the minimizing frame.

    Each ``A_r`` rotated into ``s`` must vanish off the diagonal blocks, be ``mu_r I``
    on the trailing range and have ``trace = mu_r`` on every leading block. When the
    trailing range is empty ``mu_r`` is the mean of the block traces.

    Raises
    ------
    InvalidTupleError
        If the frame and tuple do not match ``h``.
    """
    n = h.dim
    if s.tuple_spec != t or t.n != n:
        raise InvalidTupleError(t.parts, n, "frame/tuple mismatch")
    q = s.frame
    labels = np.full(n, -1, dtype=int)
    for b, cols in enumerate(t.blocks()):
        labels[list(cols)] = b
    off_block = labels[:, None] != labels[None, :]
    trailing = list(t.trailing())

    off_res, trailing_res, trace_res, mus = 0.0, 0.0, 0.0, []
    for r in range(h.codim):
        a = q.T @ h.shape_operator(r) @ q
        if off_block.any():
            off_res = max(off_res, float(np.abs(a[off_block]).max()))
        traces = [float(np.trace(a[np.ix_(cols, cols)])) for cols in map(list, t.blocks())]
        if trailing:
            sub = a[np.ix_(trailing, trailing)]
            mu = float(np.mean(np.diag(sub)))
            trailing_res = max(trailing_res, float(np.abs(sub - mu * np.eye(len(trailing))).max()))
        else:
            mu = float(np.mean(traces))
        if traces:
            trace_res = max(trace_res, max(abs(tr - mu) for tr in traces))
        mus.append(mu)

    residual = max(off_res, trailing_res, trace_res)
    return CheckResult.from_residual(
        "equality-structure",
        residual,
        tol,
        tuple_spec=t,
        details={"off_block": off_res, "trailing": trailing_res, "trace": trace_res, "mu": mus},
    )


def chen_sweep_at_point(
    h: SecondFundamentalForm,
    c: float = 0.0,
    opts: OptimizerOptions = DEFAULT_OPTIONS,
    tol: float = DEFAULT_TOLERANCES.margin,
    tuples: Sequence[TupleSpec] | None = None,
) -> list[CheckResult]:
    """chen_inequality_check for every tuple of S(n) at one point."""
    H2 = mean_curvature(h).H2
    tensor = curvature_via_gauss(h, c)
    tuples = enumerate_tuples(h.dim) if tuples is None else tuples
    profile = delta_profile(tensor, opts, tuples)
    return [chen_inequality_check(profile[t], H2, t, c, tol) for t in tuples]
