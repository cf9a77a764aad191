"""Warping-function inequality for warped products and the obstructions it implies."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from deltainv.applications.records import WarpedSpec
from deltainv.config import DEFAULT_TOLERANCES
from deltainv.custom_types import CheckResult
from deltainv.geometry.metric import laplacian

logger = logging.getLogger(__name__)

HARMONIC_LABELS = (
    "no-minimal-immersion-into-negative-curvature",
    "minimal-immersion-into-euclidean-is-warped",
)
EIGENFUNCTION_LABELS = ("no-minimal-immersion-into-nonpositive-curvature",)
COMPACT_BASE_LABELS = (
    "no-minimal-immersion-into-negative-curvature",
    "no-minimal-immersion-into-euclidean",
)


def laplacian_of_warping(w: WarpedSpec, p: Sequence[float]) -> float:
    """Positive-spectrum Laplacian of the warping function on the base at ``p``."""
    return laplacian(w.base, w.warping, p, w.base.params)


def warped_inequality_check(
    w: WarpedSpec,
    H2: float,
    max_ktilde: float,
    p: Sequence[float],
    tol: float = DEFAULT_TOLERANCES.margin,
) -> CheckResult:
    """Delta f / f <= (n1 + n2)^2 / (4 n2) H^2 + n1 max K~ at the base point ``p``.

    Raises
    ------
    EvaluationDomainError
        If ``f(p) <= 0``.
    """
    f = w.warping_value(p)
    lap = laplacian_of_warping(w, p)
    rhs = (w.n1 + w.n2) ** 2 / (4.0 * w.n2) * H2 + w.n1 * max_ktilde
    return CheckResult.from_margin(
        "warped",
        lhs=lap / f,
        rhs=rhs,
        tolerance=tol,
        details={"laplacian": lap, "f": f, "H2": H2, "max_ktilde": max_ktilde},
    )


@dataclass(frozen=True)
class WarpedFlags:
    """Which warping hypotheses hold on a sample and the conclusions they give."""

    harmonic: bool
    eigenfunction: bool
    eigenvalue: float | None
    compact_base: bool
    labels: tuple[str, ...] = ()
    ratios: list[float] = field(default_factory=list)

    def to_check(self) -> CheckResult:
        return CheckResult(
            check="warped-obstruction",
            passed=True,
            tolerance=0.0,
            margin=0.0,
            verdict=bool(self.labels),
            details={
                "harmonic": self.harmonic,
                "eigenfunction": self.eigenfunction,
                "eigenvalue": self.eigenvalue,
                "compact_base": self.compact_base,
                "labels": list(self.labels),
            },
        )


def warped_obstruction_flags(
    w: WarpedSpec, sample: Sequence[Sequence[float]], tol: float = DEFAULT_TOLERANCES.obstruction
) -> WarpedFlags:
    """Evaluate Delta f on base sample points and report the hypotheses that hold.

    ``f`` counts as harmonic when ``|Delta f| <= tol`` everywhere and as an
    eigenfunction when ``Delta f / f`` is a positive constant up to ``tol``.
    """
    laps = np.array([laplacian_of_warping(w, p) for p in sample])
    values = np.array([w.warping.value(p, w.base.params) for p in sample])
    harmonic = bool(laps.size) and bool(np.all(np.abs(laps) <= tol))

    eigenfunction, eigenvalue = False, None
    ratios: list[float] = []
    if laps.size and np.all(values > 0):
        ratios = list(laps / values)
        mean = float(np.mean(ratios))
        spread = float(np.ptp(ratios))
        if mean > tol and spread <= tol * max(1.0, abs(mean)):
            eigenfunction, eigenvalue = True, mean

    labels: list[str] = []
    for hit, group in (
        (harmonic, HARMONIC_LABELS),
        (eigenfunction, EIGENFUNCTION_LABELS),
        (w.compact_base, COMPACT_BASE_LABELS),
    ):
        if hit:
            labels.extend(label for label in group if label not in labels)
    logger.info(f"Warping hypotheses on {len(laps)} points: harmonic={harmonic}, eigenfunction={eigenfunction}")
    return WarpedFlags(harmonic, eigenfunction, eigenvalue, w.compact_base, tuple(labels), ratios)
