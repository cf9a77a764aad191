"""Equality-case patterns of the improved Lagrangian inequalities.

Both checks rotate the cubic form ``C[i, j, r] = <h(e_i, e_j), J e_r>`` into the
optimizer frame and report residuals for each pattern line rather than searching
for a better basis.
"""

from __future__ import annotations

import logging

import numpy as np

from deltainv.config import DEFAULT_TOLERANCES
from deltainv.custom_types import CheckResult, TupleSpec
from deltainv.delta.invariants import SubspaceTuple
from deltainv.exceptions import InvalidTupleError
from deltainv.lagrangian.ambient import LagrangianData

logger = logging.getLogger(__name__)


def rotated_cubic(data: LagrangianData, s: SubspaceTuple, t: TupleSpec) -> np.ndarray:
    if s.tuple_spec != t or t.n != data.dim:
        raise InvalidTupleError(t.parts, data.dim, "frame/tuple mismatch")
    q = s.frame
    return np.einsum("abc,ai,bj,ck->ijk", data.cubic, q, q, q, optimize=True)


def _max_abs(values) -> float:
    arr = np.asarray(values, dtype=float)
    return float(np.abs(arr).max()) if arr.size else 0.0


def _l2_residuals(cubic: np.ndarray, t: TupleSpec, mu: int) -> dict[str, float]:
    n = t.n
    lam = cubic[mu, mu, mu] / 3.0
    blocks = [list(cols) for cols in t.blocks()]
    others = [u for u in t.trailing() if u != mu]
    res = {
        "in_block_normal": 0.0,
        "in_block_mu": 0.0,
        "traceless": 0.0,
        "cross_block": 0.0,
        "block_mu": 0.0,
        "block_trailing": 0.0,
        "mu_mu": 0.0,
        "mu_trailing": 0.0,
        "trailing_trailing": 0.0,
    }
    eye = np.eye(n)
    everything = list(range(n))
    for i, block in enumerate(blocks):
        weight = 3.0 * lam / (2 + len(block))
        allowed = set(block) | {mu}
        outside = [r for r in range(n) if r not in allowed]
        sub = cubic[np.ix_(block, block, outside)]
        res["in_block_normal"] = max(res["in_block_normal"], _max_abs(sub))
        res["in_block_mu"] = max(
            res["in_block_mu"], _max_abs(cubic[np.ix_(block, block, [mu])][:, :, 0] - weight * np.eye(len(block)))
        )
        traces = np.einsum("aag->g", cubic[np.ix_(block, block, block)])
        res["traceless"] = max(res["traceless"], _max_abs(traces))
        for j, other in enumerate(blocks):
            if j != i:
                res["cross_block"] = max(res["cross_block"], _max_abs(cubic[np.ix_(block, other, everything)]))
        expected = weight * eye[block]
        res["block_mu"] = max(res["block_mu"], _max_abs(cubic[block, mu, :] - expected))
        if others:
            res["block_trailing"] = max(res["block_trailing"], _max_abs(cubic[np.ix_(block, others, everything)]))
    res["mu_mu"] = _max_abs(cubic[mu, mu, :] - 3.0 * lam * eye[mu])
    if others:
        res["mu_trailing"] = _max_abs(cubic[mu, others, :] - lam * eye[others])
        expected = lam * np.einsum("uv,r->uvr", np.eye(len(others)), eye[mu])
        res["trailing_trailing"] = _max_abs(cubic[np.ix_(others, others, everything)] - expected)
    res["lambda"] = float(lam)
    return res


def equality_form_check_L2(
    data: LagrangianData, s: SubspaceTuple, t: TupleSpec, tol: float = DEFAULT_TOLERANCES.equality
) -> CheckResult:
    """Residuals of the L2 equality pattern in the minimizing frame.

    ``e_{mu+1}`` is first taken as the leading trailing vector; every other trailing
    vector is then tried in its place and the best total residual is reported.

    Raises
    ------
    InvalidTupleError
        If ``sum n_i >= n`` or the frame does not match the tuple.
    """
    if t.total >= t.n:
        raise InvalidTupleError(t.parts, t.n, "L2 equality form requires sum of parts < n")
    cubic = rotated_cubic(data, s, t)
    best_mu, best = None, None
    for mu in t.trailing():
        res = _l2_residuals(cubic, t, mu)
        total = max(v for k, v in res.items() if k != "lambda")
        if best is None or total < best[0]:
            best_mu, best = mu, (total, res)
    residual, lines = best
    return CheckResult.from_residual(
        "lagrangian-L2-equality",
        residual,
        tol,
        tuple_spec=t,
        details={**lines, "mu_index": best_mu, "first_trailing_used": best_mu == t.total},
    )


def equality_conditions_check_L3(
    data: LagrangianData, s: SubspaceTuple, t: TupleSpec, tol: float = DEFAULT_TOLERANCES.equality
) -> CheckResult:
    """Residuals of conditions (a), (b), (c) for L3 equality.

    Components with three distinct indices inside one block are not constrained.

    Raises
    ------
    InvalidTupleError
        If the parts do not sum to n.
    """
    if t.total != t.n or t.k < 2:
        raise InvalidTupleError(t.parts, t.n, "L3 equality conditions require the parts to sum to n")
    cubic = rotated_cubic(data, s, t)
    n = t.n
    blocks = [list(cols) for cols in t.blocks()]
    smallest = min(t.parts)
    res_a = res_b = res_c = 0.0
    for i, bi in enumerate(blocks):
        for j, bj in enumerate(blocks):
            if i == j:
                continue
            for a in bi:
                for b in bj:
                    rest = [x for x in range(n) if x not in (a, b)]
                    res_a = max(res_a, _max_abs(cubic[a, b, rest]))
    for j, bj in enumerate(blocks):
        sums = np.einsum("aab->b", cubic[np.ix_(bj, bj, bj)])
        others = [(i, bi) for i, bi in enumerate(blocks) if i != j]
        if len(bj) != smallest:
            res_b = max(res_b, _max_abs(sums))
            for _, bi in others:
                res_b = max(res_b, _max_abs(cubic[bi, bi][:, bj]))
        else:
            for _, bi in others:
                diag = cubic[bi, bi][:, bj]
                res_c = max(res_c, _max_abs(diag - sums[None, :] / (len(bi) + 2)))
    residual = max(res_a, res_b, res_c)
    return CheckResult.from_residual(
        "lagrangian-L3-equality",
        residual,
        tol,
        tuple_spec=t,
        details={"a": res_a, "b": res_b, "c": res_c},
    )
