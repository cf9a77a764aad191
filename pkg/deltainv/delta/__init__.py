"""Chen delta-invariants at a point."""

from deltainv.delta.invariants import (
    DeltaResult,
    SubspaceTuple,
    constant_curvature_delta,
    delta_hat0,
    delta_invariant,
    delta_profile,
    maximum_principle_check,
    normalizing_coefficient,
    tau_of_subspace,
)

__all__ = [
    "DeltaResult",
    "SubspaceTuple",
    "constant_curvature_delta",
    "delta_hat0",
    "delta_invariant",
    "delta_profile",
    "maximum_principle_check",
    "normalizing_coefficient",
    "tau_of_subspace",
]
