"""Spectral bounds from delta-invariants, best ways of living and rigidity bounds.

``lambda1`` is read from record metadata with the positive-spectrum sign convention;
it is never computed from the metric.
"""

from __future__ import annotations

import logging
from dataclasses import replace
from typing import Mapping

import numpy as np
from scipy import linalg

from deltainv.applications.records import ManifoldRecord
from deltainv.config import DEFAULT_OPTIONS, DEFAULT_TOLERANCES, OptimizerOptions
from deltainv.custom_types import CheckResult, TupleSpec
from deltainv.delta.invariants import DeltaResult, delta_hat0
from deltainv.sampling import QuadratureGrid

logger = logging.getLogger(__name__)


def _homogeneity_gate(rec: ManifoldRecord, check: str) -> CheckResult | None:
    if rec.homogeneous:
        return None
    logger.warning(f"Record '{rec.name}' does not assert homogeneity; {check} is inconclusive")
    return CheckResult.inconclusive(check, "homogeneity is not asserted")


def spectral_bound_check(
    rec: ManifoldRecord, profile: Mapping[TupleSpec, DeltaResult], tol: float = DEFAULT_TOLERANCES.margin
) -> list[CheckResult]:
    """lambda1 >= n Delta(t) for every tuple in ``profile``, plus lambda1 >= n Dhat0.

    The empty tuple gives the normalized scalar curvature bound ``lambda1 >= n rho``.

    Raises
    ------
    MissingMetadataError
        If the record has no ``lambda1``.
    """
    lambda1 = rec.require("lambda1")
    gate = _homogeneity_gate(rec, "spectral")
    if gate is not None:
        return [gate]
    n = rec.dim
    results = []
    for t in sorted(profile, key=TupleSpec.sort_key):
        res = profile[t]
        results.append(
            CheckResult.from_margin(
                "spectral",
                lhs=n * res.normalized,
                rhs=lambda1,
                tolerance=tol,
                tuple_spec=t,
                certified=res.certified,
                details={"lambda1": lambda1, "normalized": res.normalized, "normalized_scalar": t.k == 0},
            )
        )
    best = max(profile.values(), key=lambda res: res.normalized)
    results.append(
        CheckResult.from_margin(
            "spectral-hat",
            lhs=n * best.normalized,
            rhs=lambda1,
            tolerance=tol,
            tuple_spec=best.tuple_spec,
            certified=all(res.certified for res in profile.values()),
            details={"lambda1": lambda1, "dhat0": best.normalized},
        )
    )
    return results


def best_living_test(rec: ManifoldRecord, dhat0: float, tol: float = DEFAULT_TOLERANCES.margin) -> CheckResult:
    """Verdict ``|lambda1 - n Dhat0| <= tol``: the manifold admits an ideal minimal immersion into a sphere.

    Raises
    ------
    MissingMetadataError
        If the record has no ``lambda1``.
    """
    lambda1 = rec.require("lambda1")
    gate = _homogeneity_gate(rec, "best-living")
    if gate is not None:
        return gate
    margin = lambda1 - rec.dim * dhat0
    return CheckResult(
        check="best-living",
        passed=margin >= -tol,
        tolerance=tol,
        margin=margin,
        lhs=rec.dim * dhat0,
        rhs=lambda1,
        verdict=abs(margin) <= tol,
        details={"lambda1": lambda1, "dhat0": dhat0},
    )


def average_bound_test(
    rec: ManifoldRecord,
    grid: QuadratureGrid,
    opts: OptimizerOptions = DEFAULT_OPTIONS,
    tol: float = DEFAULT_TOLERANCES.margin,
) -> CheckResult:
    """Compare lambda1 with n times the volume average of Dhat0 over a midpoint grid.

    The verdict is ``True`` when ``lambda1 > n * mean`` strictly (beyond ``tol``), in
    which case the manifold admits no ideal minimal immersion into any sphere. The
    quadrature volume is reported next to the declared volume.

    Raises
    ------
    MissingMetadataError
        If the record has no ``lambda1`` or no ``volume``.
    """
    lambda1 = rec.require("lambda1")
    volume = rec.require("volume")
    source = rec.metric_source
    weights, values = [], []
    for p in grid.points:
        g, _ = source.metric_jet(p)
        weights.append(float(np.sqrt(linalg.det(g))) * grid.cell_volume)
        values.append(delta_hat0(rec.curvature_at(p, opts.fd_step), opts)[0])
    weights = np.asarray(weights)
    quadrature_volume = float(weights.sum())
    mean = float(np.dot(weights, values) / quadrature_volume)
    n = rec.dim
    margin = lambda1 - n * mean
    logger.info(f"Average Dhat0 on {len(grid)} cells of '{rec.name}': {mean:.6f} (volume {quadrature_volume:.6f})")
    return CheckResult(
        check="average-bound",
        passed=margin >= -tol,
        tolerance=tol,
        margin=margin,
        lhs=n * mean,
        rhs=lambda1,
        verdict=margin > tol,
        details={"mean_dhat0": mean, "quadrature_volume": quadrature_volume, "volume": volume, "cells": len(grid)},
    )


def rigidity_bound(n: int, n1: int | None = None) -> float:
    """Lower bound for H^2 on an open part of S^n(1) or of E^(n1-1) x S^(n-n1+1)(1)."""
    if n1 is None:
        return 1.0
    if not 2 <= n1 <= n:
        raise ValueError(f"n1 must lie in [2, {n}], got {n1}")
    return ((n - n1 + 1) / n) ** 2


def rigidity_bound_check(H2: float, n: int, n1: int | None = None, tol: float = DEFAULT_TOLERANCES.margin) -> CheckResult:
    """H^2 >= bound for the unit sphere (``n1=None``) or a spherical hypercylinder.

    The verdict flags equality, which holds exactly for the standard embedding.
    """
    bound = rigidity_bound(n, n1)
    result = CheckResult.from_margin(
        "rigidity",
        lhs=bound,
        rhs=H2,
        tolerance=tol,
        details={"n1": n1, "bound": bound},
    )
    return replace(result, verdict=abs(result.margin) <= tol)
