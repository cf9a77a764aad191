"""Lagrangian inequalities L1, L2, L3 and the minimality-at-equality test."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from deltainv.config import DEFAULT_TOLERANCES
from deltainv.custom_types import CheckResult, TupleSpec
from deltainv.delta.invariants import DeltaResult, normalizing_coefficient
from deltainv.exceptions import InvalidTupleError
from deltainv.extrinsic.checks import space_form_term

logger = logging.getLogger(__name__)


class LagrangianCase(str, Enum):
    L1 = "L1"
    L2 = "L2"
    L3 = "L3"


def lagrangian_coefficient(n: int, t: TupleSpec, case: LagrangianCase | str) -> float:
    """H^2 coefficient of the selected Lagrangian inequality.

    L1 is the general coefficient c(t). L2 needs ``sum n_i < n``; L3 needs
    ``sum n_i = n`` and uses every part except the smallest.

    Raises
    ------
    InvalidTupleError
        If the tuple does not satisfy the case's hypothesis.
    """
    case = LagrangianCase(case)
    if t.n != n:
        raise InvalidTupleError(t.parts, n, f"tuple was built for n={t.n}")
    if case is LagrangianCase.L1:
        return normalizing_coefficient(n, t)
    if case is LagrangianCase.L2:
        if t.total >= n:
            raise InvalidTupleError(t.parts, n, "L2 requires sum of parts < n")
        weight = 6.0 * sum(1.0 / (2 + p) for p in t.parts)
        base = n - t.total + 3 * t.k
        return n * n * (base - 1 - weight) / (2.0 * (base + 2 - weight))
    if t.total != n or t.k < 2:
        raise InvalidTupleError(t.parts, n, "L3 requires the parts to sum to n")
    # parts are sorted, so parts[0] is the minimal one
    weight = 2.0 * sum(1.0 / (2 + p) for p in t.parts[1:])
    return n * n * (t.k - 1 - weight) / (2.0 * (t.k - weight))


def lagrangian_inequality_check(
    d: DeltaResult,
    H2: float,
    t: TupleSpec,
    c: float = 0.0,
    case: LagrangianCase | str = LagrangianCase.L1,
    tol: float = DEFAULT_TOLERANCES.margin,
) -> CheckResult:
    """delta(t) <= coeff H^2 + (1/2)(n(n-1) - sum n_i(n_i-1)) c for the chosen case."""
    case = LagrangianCase(case)
    if d.tuple_spec != t:
        raise InvalidTupleError(t.parts, t.n, f"result belongs to {d.tuple_spec.label()}")
    coeff = lagrangian_coefficient(t.n, t, case)
    rhs = coeff * H2 + space_form_term(t.n, t, c)
    return CheckResult.from_margin(
        f"lagrangian-{case.value}",
        lhs=d.delta,
        rhs=rhs,
        tolerance=tol,
        tuple_spec=t,
        certified=d.certified,
        details={"coefficient": coeff, "H2": H2, "ambient_curvature": c},
    )


@dataclass(frozen=True)
class LagrangianSample:
    """delta and H^2 at one point of a Lagrangian immersion."""

    point: tuple[float, ...]
    delta: DeltaResult
    H2: float
    c: float = 0.0


def minimality_at_equality_check(
    points: Sequence[LagrangianSample],
    t: TupleSpec,
    eps_eq: float = DEFAULT_TOLERANCES.equality,
    eps_h: float = DEFAULT_TOLERANCES.mean_curvature,
) -> CheckResult:
    """Flag points where L1 holds with equality while H^2 > eps_h.

    Equality in L1 forces minimality, so an empty flag list is a pass.
    """
    flagged = []
    for sample in points:
        if sample.delta.tuple_spec != t:
            raise InvalidTupleError(t.parts, t.n, f"sample belongs to {sample.delta.tuple_spec.label()}")
        rhs = normalizing_coefficient(t.n, t) * sample.H2 + space_form_term(t.n, t, sample.c)
        gap = abs(rhs - sample.delta.delta)
        if gap < eps_eq and sample.H2 > eps_h:
            flagged.append({"point": list(sample.point), "gap": gap, "H2": sample.H2})
    if flagged:
        logger.warning(f"{len(flagged)} points attain L1 equality without being minimal for {t.label()}")
    return CheckResult(
        check="minimality-at-equality",
        passed=not flagged,
        tolerance=0.0,
        margin=-float(len(flagged)),
        tuple_spec=t,
        verdict=bool(flagged),
        details={"flagged": flagged, "eps_eq": eps_eq, "eps_h": eps_h, "points": len(points)},
    )
