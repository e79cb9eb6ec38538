"""Physical primitives: coins, weights, bags, the balance scale and shuffles.

Masses are exact integers in two units: the heavy-coin mass ``w`` and half
the heavy/light difference, ``delta / 2``.  A heavy coin is ``(1, 0)``, a
light coin ``(1, -2)``.  The scale tolerance is assumed below ``delta / 2``,
so two piles balance exactly when their unit counts agree.
"""

from __future__ import annotations

import enum
import itertools
import random
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import Any, Optional


class ProtocolIntegrityError(RuntimeError):
    """Raised when a run violates a structural assumption of the protocol."""


@dataclass(frozen=True, order=False)
class Weight:
    w_units: int = 0
    half_delta_units: int = 0

    def __add__(self, other: "Weight") -> "Weight":
        return Weight(self.w_units + other.w_units,
                      self.half_delta_units + other.half_delta_units)

    def __neg__(self) -> "Weight":
        return Weight(-self.w_units, -self.half_delta_units)

    def __sub__(self, other: "Weight") -> "Weight":
        return self + (-other)

    def as_tuple(self) -> tuple[int, int]:
        return (self.w_units, self.half_delta_units)

    def mass(self, w, delta):
        """Concrete mass for given base mass and delta (any numeric type)."""
        return self.w_units * w + self.half_delta_units * delta / 2


class Coin(enum.Enum):
    HEAVY = "heavy"
    LIGHT = "light"

    @property
    def weight(self) -> Weight:
        return HEAVY_WEIGHT if self is Coin.HEAVY else LIGHT_WEIGHT

    @classmethod
    def for_bit(cls, bit: int) -> "Coin":
        return cls.HEAVY if bit else cls.LIGHT


HEAVY_WEIGHT = Weight(1, 0)
LIGHT_WEIGHT = Weight(1, -2)


@dataclass(frozen=True)
class CustomWeightPiece:
    """The single delta/2 reference piece; any custom weight is coins plus this."""

    value: Weight = Weight(0, 1)

    def __post_init__(self):
        if self.value != Weight(0, 1):
            raise ValueError("a custom weight piece has mass delta/2")


def custom_weight(heavy: int, light: int) -> Weight:
    """``heavy*w + light*(w - delta) + delta/2`` assembled from coins and one piece."""
    if heavy < 0 or light < 0:
        raise ValueError("coin counts must be non-negative")
    return total_weight([Coin.HEAVY] * heavy + [Coin.LIGHT] * light, CustomWeightPiece())


class ScaleOutcome(enum.IntEnum):
    LEFT_HEAVIER = 0
    BALANCED = 1
    RIGHT_HEAVIER = 2

    def mirrored(self) -> "ScaleOutcome":
        return ScaleOutcome(2 - self.value)

    @property
    def label(self) -> str:
        return self.name.lower()

    @classmethod
    def from_label(cls, label: str) -> "ScaleOutcome":
        try:
            return cls[label.upper()]
        except KeyError:
            raise ValueError(f"unknown scale outcome {label!r}") from None


_bag_ids = itertools.count()


@dataclass
class Bag:
    """An opaque bag.  ``internal_id`` and ``marked`` are never observable."""

    contents: list[Coin] = field(default_factory=list)
    marked: bool = False
    internal_id: int = field(default_factory=lambda: next(_bag_ids))

    @property
    def weight(self) -> Weight:
        # bag mass is identical for all bags, modeled as zero
        return total_weight(self.contents)

    def put(self, coin: Coin) -> None:
        self.contents.append(coin)


def total_weight(coins: Iterable[Coin], extra: Optional[CustomWeightPiece] = None) -> Weight:
    total = Weight()
    for coin in coins:
        total = total + coin.weight
    if extra is not None:
        total = total + extra.value
    return total


def compare(left: Weight, right: Weight) -> ScaleOutcome:
    """Tilt of a scale holding ``left`` and ``right``.

    Unequal piles are ordered by ``w_units`` first: ``w`` dwarfs any total of
    delta deficits the protocols can produce.
    """
    lt, rt = left.as_tuple(), right.as_tuple()
    if lt == rt:
        return ScaleOutcome.BALANCED
    return ScaleOutcome.LEFT_HEAVIER if lt > rt else ScaleOutcome.RIGHT_HEAVIER


class RandomSource:
    """Source of shuffle permutations.

    Run mode draws from a seeded :class:`random.Random`.  Transcript mode
    replays an explicit list of permutations; shuffles flagged as
    ``collapsible`` (no observable consequence) are fixed to the identity
    there and consume nothing.  Every permutation actually used is appended
    to :attr:`record`.
    """

    def __init__(self, seed: Optional[int] = None, transcript: Optional[Sequence[Sequence[int]]] = None):
        if (seed is None) == (transcript is None):
            raise ValueError("give exactly one of seed or transcript")
        self._rng = random.Random(seed) if transcript is None else None
        self._pending = [tuple(p) for p in transcript] if transcript is not None else None
        self._cursor = 0
        self.record: list[tuple[int, ...]] = []

    @classmethod
    def seeded(cls, seed: int) -> "RandomSource":
        return cls(seed=seed)

    @classmethod
    def from_transcript(cls, transcript: Sequence[Sequence[int]]) -> "RandomSource":
        return cls(transcript=transcript)

    @property
    def enumerating(self) -> bool:
        return self._pending is not None

    def permutation(self, k: int, collapsible: bool = False) -> tuple[int, ...]:
        if self._pending is None:
            perm = tuple(self._rng.sample(range(k), k))
        elif collapsible:
            return tuple(range(k))
        else:
            if self._cursor >= len(self._pending):
                raise ProtocolIntegrityError("randomness transcript exhausted")
            perm = self._pending[self._cursor]
            self._cursor += 1
            if sorted(perm) != list(range(k)):
                raise ProtocolIntegrityError(f"transcript entry {perm} is not a permutation of {k} items")
        self.record.append(perm)
        return perm


def all_permutations(k: int) -> list[tuple[int, ...]]:
    """Every ordering of ``k`` items; each has probability ``1/k!`` under a shuffle."""
    return list(itertools.permutations(range(k)))


def shuffle(items: Sequence[Any], rng: RandomSource, collapsible: bool = False) -> tuple[list[Any], tuple[int, ...]]:
    """Uniformly permute ``items``; returns the new order and the hidden record.

    Position ``i`` of the result holds ``items[perm[i]]``.
    """
    if not items:
        raise ValueError("cannot shuffle an empty sequence")
    perm = rng.permutation(len(items), collapsible=collapsible)
    return [items[j] for j in perm], perm


def find_marked(bags: Sequence[Bag]) -> int:
    hits = [i for i, bag in enumerate(bags) if bag.marked]
    if len(hits) != 1:
        raise ProtocolIntegrityError(f"expected exactly one marked bag, found {len(hits)}")
    return hits[0]
