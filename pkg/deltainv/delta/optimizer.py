"""Minimization of the total scalar curvature of mutually orthogonal subspaces.

Every tuple of orthogonal subspaces ``L_1, ..., L_k`` of dimensions ``n_1, ..., n_k``
is the span of consecutive column blocks of one orthonormal frame. The objective
``sum_j tau(L_j)`` is then a polynomial in the frame and is minimized by Givens
rotation coordinate descent: for each column pair in different blocks the objective
along the rotation angle is ``a cos^2 + g sin^2 + 2 b cos sin``, whose minimizer is
used as the first trial step of a backtracking search.

Restart 0 is the identity frame, restart 1 the Ricci eigenbasis in ascending order
and every further restart ``i`` a Haar-random frame drawn from
``default_rng([seed, i])``. The best value is reduced in restart order, so adding
restarts never makes the result worse.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import linalg
from scipy.stats import ortho_group

from deltainv.config import DEFAULT_OPTIONS, OptimizerOptions
from deltainv.custom_types import TupleSpec

logger = logging.getLogger(__name__)

MAX_BACKTRACKS = 30


@dataclass(frozen=True, eq=False)
class DescentOutcome:
    """Result of one descent run or of the reduction over all restarts."""

    value: float
    frame: np.ndarray
    converged: bool
    sweeps: int
    restarts_used: int = 1
    restart_index: int = 0


def block_labels(t: TupleSpec) -> np.ndarray:
    """Block index of every frame column; trailing columns get -1."""
    labels = np.full(t.n, -1, dtype=int)
    for b, cols in enumerate(t.blocks()):
        labels[list(cols)] = b
    return labels


def objective_from_sectional(sectional: np.ndarray, t: TupleSpec) -> float:
    total = 0.0
    for cols in t.blocks():
        sub = sectional[np.ix_(cols, cols)]
        total += float(np.triu(sub, 1).sum())
    return total


def rotate_components(comps: np.ndarray, frame: np.ndarray) -> np.ndarray:
    return np.einsum("ijkl,ia,jb,kc,ld->abcd", comps, frame, frame, frame, frame, optimize=True)


def objective(comps: np.ndarray, frame: np.ndarray, t: TupleSpec) -> float:
    """``sum_j tau(L_j)`` for the blocks of ``frame``."""
    rotated = rotate_components(comps, frame)
    return objective_from_sectional(np.einsum("abba->ab", rotated), t)


def batch_objective(comps: np.ndarray, frames: np.ndarray, t: TupleSpec) -> np.ndarray:
    """Objective for a stack of frames of shape ``(N, n, n)``; used for sampling."""
    total = np.zeros(frames.shape[0])
    for cols in t.blocks():
        cols = list(cols)
        for x, a in enumerate(cols):
            for b in cols[x + 1 :]:
                u, v = frames[:, :, a], frames[:, :, b]
                total += np.einsum("ijkl,Ni,Nj,Nk,Nl->N", comps, u, v, v, u, optimize=True)
    return total


def _apply_givens(rotated: np.ndarray, frame: np.ndarray, p: int, q: int, c: float, s: float) -> None:
    """Rotate columns ``p, q`` in place: ``a = c e_p + s e_q``, ``b = -s e_p + c e_q``."""
    for axis in range(4):
        view = np.moveaxis(rotated, axis, 0)
        tp = view[p].copy()
        tq = view[q].copy()
        view[p] = c * tp + s * tq
        view[q] = -s * tp + c * tq
    fp = frame[:, p].copy()
    fq = frame[:, q].copy()
    frame[:, p] = c * fp + s * fq
    frame[:, q] = -s * fp + c * fq


def _pair_coefficients(rotated: np.ndarray, members: list[np.ndarray], labels: np.ndarray, p: int, q: int):
    bp = members[labels[p]] if labels[p] >= 0 else np.empty(0, dtype=int)
    bq = members[labels[q]] if labels[q] >= 0 else np.empty(0, dtype=int)
    bp = bp[bp != p]
    bq = bq[bq != q]
    s_p = rotated[p, :, :, p]
    s_q = rotated[q, :, :, q]
    cross = rotated[p, :, :, q]
    alpha = float(s_p[bp, bp].sum() + s_q[bq, bq].sum())
    gamma = float(s_q[bp, bp].sum() + s_p[bq, bq].sum())
    beta = float(cross[bp, bp].sum() - cross[bq, bq].sum())
    return alpha, gamma, beta


def descend(comps: np.ndarray, t: TupleSpec, start: np.ndarray, opts: OptimizerOptions = DEFAULT_OPTIONS) -> DescentOutcome:
    """Givens coordinate descent from ``start``; one restart."""
    n = t.n
    frame = np.array(start, dtype=float)
    rotated = rotate_components(comps, frame)
    labels = block_labels(t)
    members = [np.array(list(cols), dtype=int) for cols in t.blocks()]
    pairs = [(p, q) for p in range(n) for q in range(p + 1, n) if labels[p] != labels[q]]

    converged = False
    sweeps = 0
    for sweeps in range(1, opts.max_iters + 1):
        gained = 0.0
        for p, q in pairs:
            alpha, gamma, beta = _pair_coefficients(rotated, members, labels, p, q)
            half_diff = 0.5 * (alpha - gamma)
            if math.hypot(half_diff, beta) == 0.0:
                continue
            theta = 0.5 * math.atan2(-beta, -half_diff)
            for _ in range(MAX_BACKTRACKS):
                c, s = math.cos(theta), math.sin(theta)
                trial = alpha * c * c + gamma * s * s + 2.0 * beta * c * s
                if trial < alpha:
                    break
                theta *= 0.5
            else:
                continue
            _apply_givens(rotated, frame, p, q, c, s)
            gained += alpha - trial
        if gained < opts.tol:
            converged = True
            break

    # re-orthonormalize to remove drift from repeated rotations
    u, _, vt = linalg.svd(frame)
    frame = u @ vt
    value = objective(comps, frame, t)
    return DescentOutcome(value=value, frame=frame, converged=converged, sweeps=sweeps)


def starting_frames(comps: np.ndarray, n: int, opts: OptimizerOptions):
    """Yield ``(index, frame)`` for every restart, in order."""
    yield 0, np.eye(n)
    if opts.restarts < 2:
        return
    ricci = np.einsum("ijjl->il", comps)
    _, vectors = linalg.eigh(0.5 * (ricci + ricci.T))
    yield 1, vectors
    for index in range(2, opts.restarts):
        rng = np.random.default_rng([opts.seed, index])
        yield index, ortho_group.rvs(n, random_state=rng)


def minimize_block_scalar_curvature(
    comps: np.ndarray, t: TupleSpec, opts: OptimizerOptions = DEFAULT_OPTIONS
) -> DescentOutcome:
    """Best ``sum_j tau(L_j)`` over all restarts, reduced in restart order.

    ``converged`` reports whether the winning restart met the tolerance before
    ``max_iters`` sweeps.
    """
    best: DescentOutcome | None = None
    for index, start in starting_frames(comps, t.n, opts):
        outcome = descend(comps, t, start, opts)
        logger.debug(
            f"restart {index} for {t.label()}: value {outcome.value:.12g} after {outcome.sweeps} sweeps"
        )
        if best is None or outcome.value < best.value:
            best = DescentOutcome(
                value=outcome.value,
                frame=outcome.frame,
                converged=outcome.converged,
                sweeps=outcome.sweeps,
                restart_index=index,
            )
    if not best.converged:
        logger.warning(f"Optimizer for {t.label()} hit max_iters={opts.max_iters} without converging")
    return DescentOutcome(
        value=best.value,
        frame=best.frame,
        converged=best.converged,
        sweeps=best.sweeps,
        restarts_used=opts.restarts,
        restart_index=best.restart_index,
    )
