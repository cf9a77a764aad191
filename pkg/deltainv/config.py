"""Optimizer options, default tolerances and master-seed resolution.

The master seed comes from ``--seed`` when given, otherwise from the ``DINV_SEED``
environment variable, otherwise 0. Every random stream in the package derives from
``numpy.random.default_rng([seed, index])`` so one stream never depends on how many
others were drawn.
"""

from __future__ import annotations

import logging
import os

from pydantic import BaseModel, ConfigDict, Field

logger = logging.getLogger(__name__)

SEED_ENV_VAR = "DINV_SEED"


class FrozenModel(BaseModel):
    """Immutable pydantic base for option bundles."""

    model_config = ConfigDict(frozen=True, extra="forbid")


class OptimizerOptions(FrozenModel):
    """Knobs of the Givens-descent delta optimizer."""

    restarts: int = Field(default=32, ge=1)
    max_iters: int = Field(default=200, ge=1)
    seed: int = 0
    tol: float = Field(default=1e-12, gt=0)
    closed_forms: bool = True
    dim_cap: int = Field(default=8, ge=2)
    fd_step: float = Field(default=1e-4, gt=0)


class Tolerances(FrozenModel):
    """Default acceptance tolerances of the theorem checks."""

    margin: float = 1e-6
    structure: float = 1e-5
    gauss: float = 1e-3
    lagrangian: float = 1e-8
    equality: float = 1e-6
    mean_curvature: float = 1e-6
    obstruction: float = 1e-6


DEFAULT_OPTIONS = OptimizerOptions()
DEFAULT_TOLERANCES = Tolerances()


def resolve_seed(flag: int | None = None) -> int:
    """Return the master seed: explicit flag, then ``DINV_SEED``, then 0."""
    if flag is not None:
        return int(flag)
    raw = os.environ.get(SEED_ENV_VAR)
    if raw is None or not raw.strip():
        return 0
    try:
        return int(raw)
    except ValueError:
        logger.warning(f"Ignoring non-integer {SEED_ENV_VAR}={raw!r}")
        return 0
