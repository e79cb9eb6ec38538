"""Boolean function descriptions, evaluation, classification and complement.

Assignments are bit strings with player 1's bit leftmost, e.g. ``"100"``
means ``x1=1, x2=0, x3=0``.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from typing import Union


class SpecError(ValueError):
    """A function description violates one of its invariants."""


def _check_n(n) -> None:
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise SpecError(f"n must be a positive integer, got {n!r}")


@dataclass(frozen=True)
class PlayerInputs:
    bits: tuple[int, ...]

    def __post_init__(self):
        bits = tuple(self.bits)
        if not bits:
            raise SpecError("at least one player is required")
        if any(b not in (0, 1) for b in bits):
            raise SpecError(f"input bits must be 0 or 1, got {bits}")
        object.__setattr__(self, "bits", tuple(int(b) for b in bits))

    @property
    def n(self) -> int:
        return len(self.bits)

    @classmethod
    def parse(cls, s: str) -> "PlayerInputs":
        if not s or set(s) - {"0", "1"}:
            raise SpecError(f"inputs must be a non-empty bit string, got {s!r}")
        return cls(tuple(int(c) for c in s))

    def __str__(self) -> str:
        return "".join(map(str, self.bits))


@dataclass(frozen=True)
class And:
    n: int

    def __post_init__(self):
        _check_n(self.n)


@dataclass(frozen=True)
class Threshold:
    n: int
    k: int

    def __post_init__(self):
        _check_n(self.n)
        if not isinstance(self.k, int) or not 1 <= self.k <= self.n:
            raise SpecError(f"threshold k must satisfy 1 <= k <= n={self.n}, got {self.k!r}")


@dataclass(frozen=True)
class Symmetric:
    n: int
    x_set: frozenset

    def __post_init__(self):
        _check_n(self.n)
        xs = frozenset(self.x_set)
        bad = sorted(x for x in xs if not isinstance(x, int) or not 0 <= x <= self.n)
        if bad:
            raise SpecError(f"symmetric set must be a subset of 0..{self.n}, got extra {bad}")
        object.__setattr__(self, "x_set", xs)


@dataclass(frozen=True)
class TruthTable:
    n: int
    ones: frozenset

    def __post_init__(self):
        _check_n(self.n)
        ones = frozenset(self.ones)
        for a in ones:
            if not isinstance(a, str) or len(a) != self.n or set(a) - {"0", "1"}:
                raise SpecError(f"assignment {a!r} is not a bit string of length n={self.n}")
        object.__setattr__(self, "ones", ones)

    @classmethod
    def from_function(cls, n: int, f) -> "TruthTable":
        """Tabulate ``f(bits_tuple) -> bool`` over all ``2**n`` inputs."""
        return cls(n, frozenset(a for a in all_assignments(n) if f(tuple(map(int, a)))))

    @classmethod
    def from_index(cls, n: int, index: int) -> "TruthTable":
        """Table whose row ``r`` (in :func:`all_assignments` order) is bit ``r`` of ``index``."""
        rows = all_assignments(n)
        return cls(n, frozenset(a for r, a in enumerate(rows) if index >> r & 1))


FunctionSpec = Union[And, Threshold, Symmetric, TruthTable]


@dataclass(frozen=True)
class Negated:
    """``negate XOR inner``; produced by :func:`complement`."""

    inner: FunctionSpec
    negate: bool = True

    @property
    def n(self) -> int:
        return self.inner.n


def all_assignments(n: int) -> list[str]:
    return ["".join(bits) for bits in itertools.product("01", repeat=n)]


def all_inputs(n: int) -> list[PlayerInputs]:
    return [PlayerInputs(bits) for bits in itertools.product((0, 1), repeat=n)]


def evaluate(spec: Union[FunctionSpec, Negated], x: Union[PlayerInputs, Sequence[int]]) -> int:
    if not isinstance(x, PlayerInputs):
        x = PlayerInputs(tuple(x))
    if x.n != spec.n:
        raise SpecError(f"arity mismatch: function has n={spec.n}, got {x.n} inputs")
    if isinstance(spec, Negated):
        return int(spec.negate) ^ evaluate(spec.inner, x)
    s = sum(x.bits)
    if isinstance(spec, And):
        return int(s == spec.n)
    if isinstance(spec, Threshold):
        return int(s >= spec.k)
    if isinstance(spec, Symmetric):
        return int(s in spec.x_set)
    if isinstance(spec, TruthTable):
        return int(str(x) in spec.ones)
    raise TypeError(f"not a function spec: {spec!r}")


def to_truth_table(spec: Union[FunctionSpec, Negated]) -> TruthTable:
    if isinstance(spec, TruthTable):
        return spec
    return TruthTable(spec.n, frozenset(str(x) for x in all_inputs(spec.n) if evaluate(spec, x)))


def classify(t: TruthTable) -> FunctionSpec:
    """Narrowest family describing ``t``: And, then Threshold, then Symmetric."""
    n = t.n
    if t.ones == {"1" * n}:
        return And(n)
    by_weight: dict[int, set[int]] = {}
    for a in all_assignments(n):
        by_weight.setdefault(a.count("1"), set()).add(int(a in t.ones))
    if any(len(vals) > 1 for vals in by_weight.values()):
        return t
    x_set = frozenset(s for s, vals in by_weight.items() if 1 in vals)
    for k in range(1, n + 1):
        if x_set == frozenset(range(k, n + 1)):
            return Threshold(n, k)
    return Symmetric(n, x_set)


def complement(spec: Union[Symmetric, TruthTable]) -> Negated:
    if isinstance(spec, Symmetric):
        return Negated(Symmetric(spec.n, frozenset(range(spec.n + 1)) - spec.x_set))
    if isinstance(spec, TruthTable):
        return Negated(TruthTable(spec.n, frozenset(all_assignments(spec.n)) - spec.ones))
    raise TypeError(f"complement is defined for Symmetric and TruthTable, got {type(spec).__name__}")


def ones_profile(ones: Iterable[str], n: int) -> list[tuple[int, int]]:
    """Per player ``(p_i, q_i)``: how many assignments have bit ``i`` equal 0 and 1."""
    ones = list(ones)
    return [(sum(a[i] == "0" for a in ones), sum(a[i] == "1" for a in ones)) for i in range(n)]
