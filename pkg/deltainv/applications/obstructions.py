"""Obstructions to minimal and to Lagrangian immersions detected on sampled curvature."""

from __future__ import annotations

import logging
from typing import Sequence

from deltainv.applications.records import Topology
from deltainv.config import DEFAULT_OPTIONS, DEFAULT_TOLERANCES, OptimizerOptions
from deltainv.custom_types import CheckResult, TupleSpec
from deltainv.delta.invariants import delta_profile
from deltainv.geometry.curvature import CurvatureTensor, max_ricci

logger = logging.getLogger(__name__)

NOT_DETECTED = "not detected on sample"


def minimal_obstruction(
    samples: Sequence[CurvatureTensor],
    opts: OptimizerOptions = DEFAULT_OPTIONS,
    tol: float = DEFAULT_TOLERANCES.obstruction,
) -> CheckResult:
    """Scan sampled tensors for delta(t) > tol, which rules out minimal immersions into Euclidean space.

    Positive Ricci curvature at some point is reported alongside as the classical
    obstruction. A negative scan is "not detected on sample", never a proof.
    """
    best_delta, best_tuple, best_point = float("-inf"), None, None
    ricci_peak = float("-inf")
    for index, r in enumerate(samples):
        ricci_peak = max(ricci_peak, max_ricci(r))
        for t, res in delta_profile(r, opts).items():
            if res.delta > best_delta:
                best_delta, best_tuple, best_point = res.delta, t, index
    delta_fires = best_delta > tol
    ricci_fires = ricci_peak > tol
    label = "no-minimal-immersion-into-euclidean" if delta_fires else NOT_DETECTED
    logger.info(f"Minimal obstruction over {len(samples)} samples: delta={delta_fires}, ricci={ricci_fires}")
    return CheckResult(
        check="minimal-obstruction",
        passed=True,
        tolerance=tol,
        margin=0.0,
        tuple_spec=best_tuple,
        verdict=delta_fires,
        details={
            "label": label,
            "max_delta": best_delta if samples else None,
            "sample_index": best_point,
            "ricci_fires": ricci_fires,
            "max_ricci": ricci_peak if samples else None,
        },
    )


def lagrangian_obstruction(
    samples: Sequence[CurvatureTensor],
    topology: Topology | None,
    opts: OptimizerOptions = DEFAULT_OPTIONS,
    tol: float = DEFAULT_TOLERANCES.obstruction,
) -> CheckResult:
    """Fire when b1 = 0 or pi1 is finite and some tuple has delta(t) > tol at every sampled point.

    Missing topology flags give an inconclusive result rather than a pass.
    """
    if topology is None or not topology.asserted:
        return CheckResult.inconclusive("lagrangian-obstruction", "topology flags are not asserted")
    per_tuple: dict[TupleSpec, float] = {}
    per_point = []
    for r in samples:
        profile = delta_profile(r, opts)
        per_point.append({t.label(): res.delta for t, res in profile.items()})
        for t, res in profile.items():
            per_tuple[t] = min(per_tuple.get(t, float("inf")), res.delta)
    positive = sorted((t for t, low in per_tuple.items() if low > tol), key=TupleSpec.sort_key)
    fires = topology.lagrangian_hypothesis and bool(samples) and bool(positive)
    label = "no-lagrangian-immersion-into-complex-euclidean" if fires else NOT_DETECTED
    return CheckResult(
        check="lagrangian-obstruction",
        passed=True,
        tolerance=tol,
        margin=0.0,
        tuple_spec=positive[0] if positive else None,
        verdict=fires,
        details={
            "label": label,
            "hypothesis": topology.lagrangian_hypothesis,
            "positive_tuples": [t.label() for t in positive],
            "min_delta": {t.label(): low for t, low in per_tuple.items()},
            "points": per_point,
        },
    )
