"""Compile function specs into balance-scale protocols and execute them.

Four protocol families are supported:

* ``P1_And``: players' coins against ``n`` heavy coins, one weighing.
* ``P2_Threshold``: players' coins against a custom weight ``W``.
* ``P3_Symmetric``: a pen-marked bag of players' coins weighed bag-against-bag
  with one prepared bag per count in the (possibly complemented) set.
* ``P4_General``: one bag per satisfying assignment; each bag's coins are
  poured out and weighed against ``n`` heavy coins.

A plan's decision rule is uniform: the raw output is 1 iff some weighing
shows ``accept_outcome``; the final output is ``raw XOR negate_output``.
Players' (or poured) coins sit on the left and references on the right; in
P3 the special bag starts on the left and the pair shuffle may swap sides.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, replace
from typing import Optional, Union

import numpy as np

from .apparatus import (
    Bag,
    Coin,
    ProtocolIntegrityError,
    RandomSource,
    ScaleOutcome,
    Weight,
    all_permutations,
    compare,
    custom_weight,
    find_marked,
    shuffle,
    total_weight,
)
from .functions import (
    And,
    FunctionSpec,
    PlayerInputs,
    SpecError,
    Symmetric,
    Threshold,
    TruthTable,
    all_assignments,
    classify,
    ones_profile,
)


class ProtocolKind(str, enum.Enum):
    AND = "P1_And"
    THRESHOLD = "P2_Threshold"
    SYMMETRIC = "P3_Symmetric"
    GENERAL = "P4_General"


@dataclass(frozen=True)
class BagSpec:
    """Setup of one bag.

    ``heavy``/``light`` are coins sealed in during setup (P3).  ``target`` is
    the assignment a P4 bag stands for; players deposit into it.  ``special``
    marks the P3 bag that receives the players' chosen coins.
    """

    heavy: int = 0
    light: int = 0
    target: Optional[str] = None
    special: bool = False


@dataclass(frozen=True)
class Reference:
    """What sits opposite the players' coins on every weighing."""

    heavy: int = 0
    light: int = 0
    custom: Optional[Weight] = None

    @property
    def weight(self) -> Weight:
        w = total_weight([Coin.HEAVY] * self.heavy + [Coin.LIGHT] * self.light)
        return w + self.custom if self.custom is not None else w

    @property
    def coins(self) -> int:
        return self.heavy + self.light


@dataclass(frozen=True)
class ResourceCount:
    coins: int
    bags: int
    comparisons_max: int
    uses_custom_weight: bool = False
    uses_pen: bool = False

    def __post_init__(self):
        if min(self.coins, self.bags, self.comparisons_max) < 0:
            raise ValueError("resource counts are non-negative")

    def cost_key(self) -> tuple[int, int, int]:
        return (self.comparisons_max, self.bags, self.coins)

    def summary(self) -> str:
        return f"coins={self.coins} bags={self.bags} comparisons={self.comparisons_max}"


@dataclass(frozen=True)
class ProtocolPlan:
    kind: ProtocolKind
    n: int
    player_issue: tuple[tuple[int, int], ...]
    resources: ResourceCount
    reference: Optional[Reference] = None
    prepared_bags: tuple[BagSpec, ...] = ()
    custom_weight: Optional[Weight] = None
    negate_output: bool = False
    accept_outcome: ScaleOutcome = ScaleOutcome.BALANCED
    stop_on_accept: bool = False
    # P3 only; False gives the insecure "special bag always left" variant
    pair_shuffle: bool = True
    notes: tuple[str, ...] = ()
    source: Optional[FunctionSpec] = None

    @property
    def weighing_bags(self) -> tuple[BagSpec, ...]:
        """Bags that are weighed one per comparison (excludes P3's special bag)."""
        return tuple(b for b in self.prepared_bags if not b.special)


@dataclass(frozen=True)
class Weighing:
    left: Weight
    right: Weight
    outcome: ScaleOutcome


@dataclass(frozen=True)
class ExecutionTrace:
    transcript: tuple[tuple[int, ...], ...]
    events: tuple[Weighing, ...]
    raw_output: int
    output: int

    @property
    def view(self) -> tuple[ScaleOutcome, ...]:
        return tuple(e.outcome for e in self.events)


def _notes(custom: bool = False, pen: bool = False, negate: bool = False) -> tuple[str, ...]:
    out = []
    if custom:
        out.append("uses a custom weight")
    if pen:
        out.append("uses a pen")
    if negate:
        out.append("computes the complement and negates the output")
    return tuple(out)


def plan_and(n: int) -> ProtocolPlan:
    if not isinstance(n, int) or n < 1:
        raise SpecError(f"n must be a positive integer, got {n!r}")
    return ProtocolPlan(
        kind=ProtocolKind.AND,
        n=n,
        player_issue=((1, 1),) * n,
        reference=Reference(heavy=n),
        resources=ResourceCount(coins=3 * n, bags=0, comparisons_max=1),
        source=And(n),
    )


def plan_threshold(n: int, k: int) -> ProtocolPlan:
    spec = Threshold(n, k)
    # (k-1) heavy + (n-k+1) light + delta/2  ==  (n, 2k - 2n - 1)
    W = custom_weight(k - 1, n - k + 1)
    return ProtocolPlan(
        kind=ProtocolKind.THRESHOLD,
        n=n,
        player_issue=((1, 1),) * n,
        reference=Reference(custom=W),
        custom_weight=W,
        accept_outcome=ScaleOutcome.LEFT_HEAVIER,
        resources=ResourceCount(coins=2 * n, bags=0, comparisons_max=1, uses_custom_weight=True),
        notes=_notes(custom=True),
        source=spec,
    )


def plan_symmetric(n: int, x_set) -> ProtocolPlan:
    spec = Symmetric(n, frozenset(x_set))
    x_eff, negate = set(spec.x_set), False
    if len(x_eff) > (n + 1) / 2:
        x_eff, negate = set(range(n + 1)) - x_eff, True
    m = len(x_eff)
    bags = tuple(BagSpec(heavy=k, light=n - k) for k in sorted(x_eff)) + (BagSpec(special=True),)
    return ProtocolPlan(
        kind=ProtocolKind.SYMMETRIC,
        n=n,
        player_issue=((1, 1),) * n,
        prepared_bags=bags,
        negate_output=negate,
        stop_on_accept=True,
        resources=ResourceCount(coins=n * (m + 2), bags=m + 1, comparisons_max=m, uses_pen=True),
        notes=_notes(pen=True, negate=negate),
        source=spec,
    )


def boole_order(assignment: str) -> int:
    """Sort key listing assignments with player 1's bit varying fastest."""
    return int(assignment[::-1], 2)


def plan_general(n: int, ones) -> ProtocolPlan:
    spec = TruthTable(n, frozenset(ones))
    ones_eff, negate = set(spec.ones), False
    if len(ones_eff) > 2 ** (n - 1):
        ones_eff, negate = set(all_assignments(n)) - ones_eff, True
    targets = sorted(ones_eff, key=boole_order)
    issue = tuple((max(p, q), max(p, q)) for p, q in ones_profile(targets, n))
    return ProtocolPlan(
        kind=ProtocolKind.GENERAL,
        n=n,
        player_issue=issue,
        reference=Reference(heavy=n),
        prepared_bags=tuple(BagSpec(target=b) for b in targets),
        negate_output=negate,
        resources=ResourceCount(
            coins=sum(h + l for h, l in issue) + n,
            bags=len(targets),
            comparisons_max=len(targets),
        ),
        notes=_notes(negate=negate),
        source=spec,
    )


def compile_spec(spec: FunctionSpec) -> ProtocolPlan:
    """Pick the protocol for ``spec``; truth tables get the cheapest family that fits."""
    if isinstance(spec, And):
        return plan_and(spec.n)
    if isinstance(spec, Threshold):
        return plan_threshold(spec.n, spec.k)
    if isinstance(spec, Symmetric):
        return plan_symmetric(spec.n, spec.x_set)
    if not isinstance(spec, TruthTable):
        raise SpecError(f"cannot compile {type(spec).__name__}")
    family = classify(spec)
    if isinstance(family, (And, Threshold)):
        plan = compile_spec(family)
    elif isinstance(family, Symmetric):
        candidates = [plan_symmetric(family.n, family.x_set), plan_general(spec.n, spec.ones)]
        plan = min(candidates, key=lambda p: p.resources.cost_key())
    else:
        plan = plan_general(spec.n, spec.ones)
    return replace(plan, source=spec)


def deposit_matrix(plan: ProtocolPlan) -> dict[str, list[dict[str, list[str]]]]:
    """For a P4 plan: which coin each player puts in each bag, per input bit."""
    if plan.kind is not ProtocolKind.GENERAL:
        raise ValueError("deposit matrix is defined for P4_General plans")
    rows = []
    for i in range(plan.n):
        row = {}
        for bit in (1, 0):
            row[f"x={bit}"] = [Coin.for_bit(int(str(bit) == b.target[i])).value for b in plan.prepared_bags]
        rows.append(row)
    return {"bags": [b.target for b in plan.prepared_bags], "players": rows}


# ---------------------------------------------------------------- execution


class _Purse:
    """A player's issued coins; choosing a coin removes it."""

    def __init__(self, heavy: int, light: int):
        self.left = {Coin.HEAVY: heavy, Coin.LIGHT: light}

    def take(self, coin: Coin) -> Coin:
        if self.left[coin] <= 0:
            raise ProtocolIntegrityError(f"player has no {coin.value} coin left to use")
        self.left[coin] -= 1
        return coin


def _check_arity(plan: ProtocolPlan, x: PlayerInputs) -> None:
    if x.n != plan.n:
        raise SpecError(f"arity mismatch: plan has n={plan.n}, got {x.n} inputs")
    if len(plan.player_issue) != plan.n:
        raise ProtocolIntegrityError("plan issues coins to the wrong number of players")


def execute(plan: ProtocolPlan, x: Union[PlayerInputs, str], rng: RandomSource) -> ExecutionTrace:
    """Run ``plan`` once on inputs ``x`` with shuffles drawn from ``rng``."""
    if isinstance(x, str):
        x = PlayerInputs.parse(x)
    _check_arity(plan, x)
    purses = [_Purse(h, l) for h, l in plan.player_issue]
    events: list[Weighing] = []

    def weigh(left: Weight, right: Weight) -> ScaleOutcome:
        outcome = compare(left, right)
        events.append(Weighing(left, right, outcome))
        return outcome

    if plan.kind in (ProtocolKind.AND, ProtocolKind.THRESHOLD):
        chosen = [purse.take(Coin.for_bit(b)) for purse, b in zip(purses, x.bits)]
        weigh(total_weight(chosen), plan.reference.weight)

    elif plan.kind is ProtocolKind.SYMMETRIC:
        special = Bag(marked=True)
        for purse, b in zip(purses, x.bits):
            special.put(purse.take(Coin.for_bit(b)))
        others = [Bag([Coin.HEAVY] * s.heavy + [Coin.LIGHT] * s.light) for s in plan.weighing_bags]
        if others:
            others, _ = shuffle(others, rng)
        for bag in others:
            pair = [special, bag]
            if plan.pair_shuffle:
                pair, _ = shuffle(pair, rng)
            outcome = weigh(pair[0].weight, pair[1].weight)
            if outcome is plan.accept_outcome and plan.stop_on_accept:
                break
            pair, _ = shuffle(pair, rng, collapsible=True)
            special = pair[find_marked(pair)]

    elif plan.kind is ProtocolKind.GENERAL:
        bags = []
        for spec in plan.weighing_bags:
            bag = Bag()
            for i, (purse, b) in enumerate(zip(purses, x.bits)):
                bag.put(purse.take(Coin.for_bit(int(b == int(spec.target[i])))))
            bags.append(bag)
        if bags:
            bags, _ = shuffle(bags, rng)
        for bag in bags:
            weigh(bag.weight, plan.reference.weight)

    else:
        raise ProtocolIntegrityError(f"unknown protocol kind {plan.kind!r}")

    raw = int(any(e.outcome is plan.accept_outcome for e in events))
    return ExecutionTrace(
        transcript=tuple(rng.record),
        events=tuple(events),
        raw_output=raw,
        output=raw ^ int(plan.negate_output),
    )


# ------------------------------------------------- batched-enumeration support


def weighing_outcomes(plan: ProtocolPlan, x: PlayerInputs) -> np.ndarray:
    """Outcome of each potential weighing before any side swap, in bag order.

    Entry ``j`` is what the scale shows when bag ``j`` of
    :attr:`ProtocolPlan.weighing_bags` is weighed with the players' side on
    the left (P1/P2 have a single entry).
    """
    _check_arity(plan, x)
    chosen = total_weight(Coin.for_bit(b) for b in x.bits)
    if plan.kind in (ProtocolKind.AND, ProtocolKind.THRESHOLD):
        out = [compare(chosen, plan.reference.weight)]
    elif plan.kind is ProtocolKind.SYMMETRIC:
        out = [compare(chosen, total_weight([Coin.HEAVY] * s.heavy + [Coin.LIGHT] * s.light))
               for s in plan.weighing_bags]
    elif plan.kind is ProtocolKind.GENERAL:
        ref = plan.reference.weight
        out = [compare(total_weight(Coin.for_bit(int(b == int(s.target[i]))) for i, b in enumerate(x.bits)), ref)
               for s in plan.weighing_bags]
    else:
        raise ProtocolIntegrityError(f"unknown protocol kind {plan.kind!r}")
    return np.array([int(o) for o in out], dtype=np.int8)


@dataclass(frozen=True)
class RandomnessSpace:
    """All transcripts of a plan as (bag order, side flips) index arrays.

    Transcript ``t`` uses ``perms[t // F]`` and ``sides[t % F]`` with
    ``F = len(sides)``; all transcripts are equiprobable.
    """

    perms: np.ndarray
    sides: np.ndarray
    collapsed: tuple[str, ...] = ()
    has_bag_shuffle: bool = True
    has_side_shuffle: bool = False

    @property
    def size(self) -> int:
        return len(self.perms) * len(self.sides)

    def transcript(self, t: int) -> tuple[tuple[int, ...], ...]:
        """The :class:`RandomSource` transcript realizing index ``t``."""
        p, f = divmod(t, len(self.sides))
        m = self.perms.shape[1]
        if not self.has_bag_shuffle:
            return ()
        out = [tuple(int(v) for v in self.perms[p])]
        if self.has_side_shuffle:
            out += [(1, 0) if self.sides[f, i] else (0, 1) for i in range(m)]
        return tuple(out)


_perm_cache: dict[int, np.ndarray] = {}


def permutation_array(m: int) -> np.ndarray:
    if m not in _perm_cache:
        arr = np.array(all_permutations(m), dtype=np.int64).reshape(math.factorial(m), m)
        _perm_cache[m] = arr
    return _perm_cache[m]


def randomness_space(plan: ProtocolPlan) -> RandomnessSpace:
    if plan.kind in (ProtocolKind.AND, ProtocolKind.THRESHOLD):
        one = np.zeros((1, 1), dtype=np.int64)
        return RandomnessSpace(one, one.astype(np.int8), has_bag_shuffle=False)
    m = len(plan.weighing_bags)
    if m == 0:
        empty = np.zeros((1, 0), dtype=np.int64)
        return RandomnessSpace(empty, empty.astype(np.int8), has_bag_shuffle=False)
    perms = permutation_array(m)
    if plan.kind is ProtocolKind.SYMMETRIC:
        collapsed = ("post-weighing pair shuffle fixed to identity: no view bit depends on it",)
        if plan.pair_shuffle:
            sides = np.array(list(itertools.product((0, 1), repeat=m)), dtype=np.int8)
            return RandomnessSpace(perms, sides, collapsed, has_side_shuffle=True)
        return RandomnessSpace(perms, np.zeros((1, m), dtype=np.int8), collapsed)
    return RandomnessSpace(perms, np.zeros((1, m), dtype=np.int8))
