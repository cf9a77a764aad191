"""Report records: one theorem check at one point and tuple, with its context."""

from __future__ import annotations

import math
from datetime import datetime, timezone
from typing import Any, Sequence

import numpy as np
from pydantic import ConfigDict, Field, model_validator

from deltainv.custom_types import CheckResult, TupleSpec
from deltainv.spec.base import WireModel


def to_plain(value: Any) -> Any:
    """Recursively convert numpy values, tuples and TupleSpecs into JSON-ready Python values.

    Non-finite floats become their string form so the output stays strict JSON.
    """
    if isinstance(value, TupleSpec):
        return list(value.parts)
    if isinstance(value, dict):
        return {str(k): to_plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_plain(value.tolist())
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    return value


def utc_timestamp() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


class OptimizerMeta(WireModel):
    restarts: int = Field(ge=0)
    seed: int
    method: str | None = None
    converged: bool | None = None


class ReportRecord(WireModel):
    """Wire form of a :class:`~deltainv.custom_types.CheckResult`.

    ``passed`` must agree with ``margin >= -tolerance``.
    """

    model_config = ConfigDict(extra="forbid", populate_by_name=True, allow_inf_nan=False)

    check: str = Field(min_length=1)
    name: str
    point: list[float] | None = None
    tuple_parts: list[int] | None = Field(default=None, alias="tuple")
    lhs: float | None = None
    rhs: float | None = None
    margin: float
    passed: bool
    tolerance: float = Field(ge=0)
    certified: bool = True
    optimizer: OptimizerMeta | None = None
    timestamp: str | None = None
    verdict: bool | None = None
    details: dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check_passed(self) -> ReportRecord:
        if self.passed != (self.margin >= -self.tolerance):
            raise ValueError(
                f"passed={self.passed} disagrees with margin {self.margin} and tolerance {self.tolerance}"
            )
        return self

    @classmethod
    def from_check(
        cls,
        result: CheckResult,
        name: str,
        point: Sequence[float] | None = None,
        optimizer: OptimizerMeta | None = None,
        timestamp: str | None = None,
    ) -> ReportRecord:
        return cls(
            check=result.check,
            name=name,
            point=None if point is None else [float(x) for x in point],
            tuple_parts=None if result.tuple_spec is None else list(result.tuple_spec.parts),
            lhs=result.lhs,
            rhs=result.rhs,
            margin=result.margin,
            passed=bool(result.passed),
            tolerance=result.tolerance,
            certified=bool(result.certified),
            optimizer=optimizer,
            timestamp=timestamp,
            verdict=None if result.verdict is None else bool(result.verdict),
            details=to_plain(result.details),
        )
