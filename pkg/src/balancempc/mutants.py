"""Deliberately broken plan variants used to show the checks have teeth."""

from dataclasses import replace

from .apparatus import Weight
from .engine import ProtocolKind, ProtocolPlan, Reference


def flip_threshold_offset(plan: ProtocolPlan) -> ProtocolPlan:
    """P2 with the custom weight's ``+delta/2`` turned into ``-delta/2``.

    The reference then sits below ``k-1`` heavy coins, so inputs with exactly
    ``k-1`` ones are wrongly accepted.
    """
    if plan.kind is not ProtocolKind.THRESHOLD:
        raise ValueError("threshold mutant needs a P2_Threshold plan")
    W = plan.custom_weight
    bad = Weight(W.w_units, W.half_delta_units - 2)
    return replace(plan, custom_weight=bad, reference=Reference(custom=bad))


def without_pair_shuffle(plan: ProtocolPlan) -> ProtocolPlan:
    """P3 where the special bag always goes on the left pan."""
    if plan.kind is not ProtocolKind.SYMMETRIC:
        raise ValueError("pair-shuffle mutant needs a P3_Symmetric plan")
    return replace(plan, pair_shuffle=False)
