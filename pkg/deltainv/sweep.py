"""Grid sweeps that turn manifold records into report records.

Each ``run_*`` function evaluates one check family over the interior grid of a
record and returns :class:`~deltainv.report.model.ReportRecord` objects in grid
order, then tuple order. Points may be evaluated concurrently; results are always
collected in grid order so reports are reproducible.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence, TypeVar

import numpy as np

from deltainv.applications.obstructions import lagrangian_obstruction, minimal_obstruction
from deltainv.applications.records import ManifoldRecord, RecordKind
from deltainv.applications.spectral import (
    average_bound_test,
    best_living_test,
    rigidity_bound_check,
    spectral_bound_check,
)
from deltainv.applications.warped import warped_inequality_check, warped_obstruction_flags
from deltainv.combinatorics import enumerate_tuples
from deltainv.config import DEFAULT_OPTIONS, DEFAULT_TOLERANCES, OptimizerOptions, Tolerances
from deltainv.custom_types import CheckResult, TupleSpec
from deltainv.delta.invariants import delta_hat0, delta_profile
from deltainv.exceptions import InvalidTupleError, MissingMetadataError
from deltainv.extrinsic.checks import IdealityReport, chen_inequality_check, point_ideality
from deltainv.extrinsic.immersion import (
    ImmersionField,
    SecondFundamentalForm,
    curvature_via_gauss,
    gauss_residual,
    mean_curvature,
    second_fundamental_form,
)
from deltainv.geometry.curvature import constant_curvature, max_ricci, scalar_tau
from deltainv.lagrangian.ambient import lagrangian_data
from deltainv.lagrangian.equality import equality_conditions_check_L3, equality_form_check_L2
from deltainv.lagrangian.inequalities import (
    LagrangianCase,
    LagrangianSample,
    lagrangian_inequality_check,
    minimality_at_equality_check,
)
from deltainv.report.model import OptimizerMeta, ReportRecord
from deltainv.sampling import interior_grid, midpoint_grid

logger = logging.getLogger(__name__)

T = TypeVar("T")

CHECK_KINDS = ("chen", "lagrangian", "warped", "spectral", "ideality", "obstruction", "gauss")

EQUALITY_PATTERNS = {
    LagrangianCase.L2: equality_form_check_L2,
    LagrangianCase.L3: equality_conditions_check_L3,
}


@dataclass(frozen=True)
class SweepSettings:
    """Everything a sweep needs besides the record."""

    opts: OptimizerOptions = DEFAULT_OPTIONS
    tolerances: Tolerances = DEFAULT_TOLERANCES
    grid: int = 4
    tuple_spec: TupleSpec | None = None
    all_tuples: bool = True
    case: LagrangianCase = LagrangianCase.L1
    rigidity: str | None = None
    workers: int = 1
    timestamp: str | None = None
    points: list[list[float]] | None = field(default=None)

    def tuples_for(self, n: int) -> list[TupleSpec]:
        if self.tuple_spec is not None and not self.all_tuples:
            if self.tuple_spec.n != n:
                raise InvalidTupleError(self.tuple_spec.parts, n, f"tuple was built for n={self.tuple_spec.n}")
            return [self.tuple_spec]
        return enumerate_tuples(n)

    @property
    def optimizer_meta(self) -> OptimizerMeta:
        return OptimizerMeta(restarts=self.opts.restarts, seed=self.opts.seed)


def sample_points(record: ManifoldRecord, settings: SweepSettings) -> list[np.ndarray | None]:
    """Explicit points when given, else the shrunk interior grid; point data has one implicit point."""
    if record.kind is RecordKind.POINT_DATA:
        return [None]
    if settings.points is not None:
        return [np.asarray(p, dtype=float) for p in settings.points]
    return list(interior_grid(record.domain, settings.grid))


def _map_points(fn: Callable[[np.ndarray | None], T], points: Sequence, workers: int) -> list[T]:
    if workers <= 1 or len(points) <= 1:
        return [fn(p) for p in points]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, points))


def _records(
    results: Sequence[CheckResult], record: ManifoldRecord, point, settings: SweepSettings
) -> list[ReportRecord]:
    return [
        ReportRecord.from_check(result, record.name, point, settings.optimizer_meta, settings.timestamp)
        for result in results
    ]


def _immersion(record: ManifoldRecord) -> ImmersionField:
    return record.require("immersion")


def _second_fundamental_form(record: ManifoldRecord, p) -> SecondFundamentalForm:
    if record.kind is RecordKind.POINT_DATA:
        if record.point_data.h is None:
            raise MissingMetadataError(record.name, "h")
        return record.point_data.h
    return second_fundamental_form(_immersion(record), p)


def run_chen(record: ManifoldRecord, settings: SweepSettings) -> list[ReportRecord]:
    """delta(t) <= c(t) H^2 + space-form term at every grid point and tuple."""
    c = record.ambient_curvature
    tuples = settings.tuples_for(record.dim)

    def at(p):
        h = _second_fundamental_form(record, p)
        H2 = mean_curvature(h).H2
        profile = delta_profile(curvature_via_gauss(h, c), settings.opts, tuples)
        results = [chen_inequality_check(profile[t], H2, t, c, settings.tolerances.margin) for t in tuples]
        return _records(results, record, p, settings)

    return _flatten(_map_points(at, sample_points(record, settings), settings.workers))


def _lagrangian_tuples(n: int, case: LagrangianCase, tuples: list[TupleSpec]) -> list[TupleSpec]:
    if case is LagrangianCase.L1:
        return [t for t in tuples if t.k > 0]
    if case is LagrangianCase.L2:
        return [t for t in tuples if t.k > 0 and t.total < n]
    return [t for t in tuples if t.k >= 2 and t.total == n]


def run_lagrangian(record: ManifoldRecord, settings: SweepSettings) -> list[ReportRecord]:
    """Lagrangian residual, the selected inequality and its equality pattern, plus minimality at equality."""
    f = _immersion(record)
    tol = settings.tolerances
    c = record.ambient_curvature
    n = record.dim
    tuples = _lagrangian_tuples(n, settings.case, settings.tuples_for(n))
    if not tuples:
        raise InvalidTupleError((), n, f"no tuple of S({n}) satisfies the {settings.case.value} hypothesis")

    def at(p):
        data = lagrangian_data(f, p, tol.lagrangian)
        results = [CheckResult.from_residual("lagrangian-residual", data.symplectic_residual, tol.lagrangian)]
        H2 = mean_curvature(data.sff).H2
        profile = delta_profile(curvature_via_gauss(data.sff, c), settings.opts, tuples)
        for t in tuples:
            check = lagrangian_inequality_check(profile[t], H2, t, c, settings.case, tol.margin)
            results.append(check)
            if settings.case is not LagrangianCase.L1 and abs(check.margin) <= tol.equality:
                pattern = EQUALITY_PATTERNS[settings.case]
                results.append(pattern(data, profile[t].minimizer, t, tol.equality))
        samples = [LagrangianSample(tuple(p), profile[t], H2, c) for t in tuples]
        return _records(results, record, p, settings), samples

    points = sample_points(record, settings)
    outcomes = _map_points(at, points, settings.workers)
    out = _flatten(records for records, _ in outcomes)
    for t in tuples:
        samples = [s for _, point_samples in outcomes for s in point_samples if s.delta.tuple_spec == t]
        check = minimality_at_equality_check(samples, t, tol.equality, tol.mean_curvature)
        out.extend(_records([check], record, None, settings))
    return out


def run_warped(record: ManifoldRecord, settings: SweepSettings) -> list[ReportRecord]:
    """Warping-function inequality at each grid point, then the warping hypotheses on the base sample."""
    w = record.require("warped")
    f = _immersion(record)
    tol = settings.tolerances
    max_ktilde = record.ambient_curvature
    points = sample_points(record, settings)

    def at(p):
        H2 = mean_curvature(second_fundamental_form(f, p)).H2
        base, _ = w.split(p)
        return _records([warped_inequality_check(w, H2, max_ktilde, base, tol.margin)], record, p, settings)

    out = _flatten(_map_points(at, points, settings.workers))
    bases = np.unique(np.array([w.split(p)[0] for p in points]), axis=0)
    flags = warped_obstruction_flags(w, bases, tol.obstruction)
    out.extend(_records([flags.to_check()], record, None, settings))
    return out


def run_spectral(record: ManifoldRecord, settings: SweepSettings) -> list[ReportRecord]:
    """Spectral bounds at the chart center, best-living verdict and, with a volume, the average bound."""
    if record.lambda1 is None:
        raise MissingMetadataError(record.name, "lambda1")
    center = None if record.kind is RecordKind.POINT_DATA else interior_grid(record.domain, 1)[0]
    tensor = record.curvature_at(center, settings.opts.fd_step)
    profile = delta_profile(tensor, settings.opts)
    dhat, _ = delta_hat0(tensor, settings.opts, profile)
    tol = settings.tolerances.margin
    results = spectral_bound_check(record, profile, tol)
    results.append(best_living_test(record, dhat, tol))
    out = _records(results, record, center, settings)
    if record.volume is not None and record.kind is not RecordKind.POINT_DATA:
        grid = midpoint_grid(record.domain, settings.grid)
        out.extend(_records([average_bound_test(record, grid, settings.opts, tol)], record, None, settings))
    else:
        logger.warning(f"Record '{record.name}' has no volume; skipping the average bound")
    return out


def _rigidity_n1(settings: SweepSettings) -> tuple[bool, int | None]:
    if settings.rigidity is None:
        return False, None
    if settings.rigidity == "sphere":
        return True, None
    return True, int(settings.rigidity)


def run_ideality(record: ManifoldRecord, settings: SweepSettings) -> list[ReportRecord]:
    """H^2 = Dhat0, the equality structure at the arg-max tuple and, when equal somewhere, the maximum principle.

    A final summary record carries the verdict for the whole sample.
    """
    tol = settings.tolerances
    rigid, n1 = _rigidity_n1(settings)

    def at(p):
        h = _second_fundamental_form(record, p)
        ideal = point_ideality(h, settings.opts, tol.margin, tol.structure)
        results = [ideal.result, ideal.structure]
        if ideal.maximum_principle is not None:
            results.append(ideal.maximum_principle)
        if rigid:
            results.append(rigidity_bound_check(ideal.H2, h.dim, n1, tol.margin))
        return _records(results, record, p, settings), ideal

    outcomes = _map_points(at, sample_points(record, settings), settings.workers)
    out = _flatten(records for records, _ in outcomes)
    summary = IdealityReport(points=[ideal for _, ideal in outcomes], tolerance=tol.margin)
    logger.info(f"Ideality of '{record.name}' over {len(outcomes)} points: max gap {summary.max_gap:.3e}")
    out.extend(_records([summary.to_check()], record, None, settings))
    return out


def run_obstruction(record: ManifoldRecord, settings: SweepSettings) -> list[ReportRecord]:
    """Minimal and Lagrangian obstructions over the sampled curvature."""
    fd_step = settings.opts.fd_step
    points = sample_points(record, settings)
    tensors = _map_points(lambda p: record.curvature_at(p, fd_step), points, settings.workers)
    topology = record.topology if record.topology.asserted else None
    tol = settings.tolerances.obstruction
    results = [
        minimal_obstruction(tensors, settings.opts, tol),
        lagrangian_obstruction(tensors, topology, settings.opts, tol),
    ]
    return _records(results, record, None, settings)


def run_gauss(record: ManifoldRecord, settings: SweepSettings) -> list[ReportRecord]:
    """Intrinsic finite-difference curvature against the Gauss equation at each grid point."""
    f = _immersion(record)
    tol = settings.tolerances.gauss

    def at(p):
        residual = gauss_residual(f, p, settings.opts.fd_step)
        return _records([CheckResult.from_residual("gauss", residual, tol)], record, p, settings)

    return _flatten(_map_points(at, sample_points(record, settings), settings.workers))


RUNNERS: dict[str, Callable[[ManifoldRecord, SweepSettings], list[ReportRecord]]] = {
    "chen": run_chen,
    "lagrangian": run_lagrangian,
    "warped": run_warped,
    "spectral": run_spectral,
    "ideality": run_ideality,
    "obstruction": run_obstruction,
    "gauss": run_gauss,
}


def run_check(kind: str, record: ManifoldRecord, settings: SweepSettings) -> list[ReportRecord]:
    runner = RUNNERS.get(kind)
    if runner is None:
        raise ValueError(f"Unknown check '{kind}'; choose from {', '.join(CHECK_KINDS)}")
    logger.info(f"Running {kind} on '{record.name}'")
    records = runner(record, settings)
    failed = sum(not r.passed for r in records)
    logger.info(f"{kind} on '{record.name}': {len(records)} records, {failed} failed")
    return records


def compute_at_point(record: ManifoldRecord, p, settings: SweepSettings) -> list[dict]:
    """Curvature summary and delta(t) for the selected tuples at one point."""
    tensor = record.curvature_at(p, settings.opts.fd_step)
    tuples = settings.tuples_for(tensor.dim)
    profile = delta_profile(tensor, settings.opts, tuples)
    H2 = None
    if record.immersion is not None:
        H2 = mean_curvature(second_fundamental_form(record.immersion, p)).H2
    elif record.kind is RecordKind.POINT_DATA and record.point_data.h is not None:
        H2 = mean_curvature(record.point_data.h).H2
    common = {
        "name": record.name,
        "point": None if p is None else [float(x) for x in p],
        "tau": scalar_tau(tensor),
        "max_ricci": max_ricci(tensor),
        "constant_curvature": constant_curvature(tensor),
        "H2": H2,
    }
    rows = []
    for t in tuples:
        res = profile[t]
        rows.append(
            {
                **common,
                "tuple": list(t.parts),
                "delta": res.delta,
                "normalized": res.normalized,
                "coefficient": res.coeff_c,
                "certified": res.certified,
                "method": res.method,
                "converged": res.converged,
                "restarts": res.restarts_used,
                "seed": settings.opts.seed,
                "timestamp": settings.timestamp,
            }
        )
    return rows


def _flatten(chunks) -> list:
    return [item for chunk in chunks for item in chunk]
