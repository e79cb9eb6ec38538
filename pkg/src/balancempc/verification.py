"""Exhaustive correctness, security and resource checks with exact probabilities.

Every randomness transcript of a plan is equiprobable, so the probability of
a view is (number of transcripts producing it) / (number of transcripts),
kept as a :class:`fractions.Fraction`.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional, Union

import numpy as np

from .apparatus import ScaleOutcome
from .engine import (
    ProtocolKind,
    ProtocolPlan,
    RandomnessSpace,
    randomness_space,
    weighing_outcomes,
)
from .functions import (
    FunctionSpec,
    Negated,
    PlayerInputs,
    SpecError,
    all_inputs,
    evaluate,
    ones_profile,
)
from .kernels import decode_view, enumerate_views

View = tuple[ScaleOutcome, ...]

# pairwise comparison within an output class up to this many players
PAIRWISE_MAX_N = 6
MAX_COUNTEREXAMPLES = 20


@dataclass(frozen=True)
class ViewDistribution:
    probabilities: dict

    def __post_init__(self):
        probs = {tuple(v): Fraction(p) for v, p in self.probabilities.items()}
        if any(p <= 0 for p in probs.values()):
            raise ValueError("view probabilities must be positive")
        if sum(probs.values()) != 1:
            raise ValueError("view probabilities must sum to exactly 1")
        object.__setattr__(self, "probabilities", probs)

    def __getitem__(self, view) -> Fraction:
        return self.probabilities.get(tuple(view), Fraction(0))

    def __len__(self) -> int:
        return len(self.probabilities)

    def items(self):
        return sorted(self.probabilities.items(), key=lambda kv: [int(o) for o in kv[0]])

    def to_json(self) -> list[dict[str, Any]]:
        return [
            {"view": [o.label for o in v], "probability": f"{p.numerator}/{p.denominator}"}
            for v, p in self.items()
        ]


@dataclass
class VerificationReport:
    check: str
    counterexamples: list = field(default_factory=list)
    inputs_visited: int = 0
    transcripts_visited: int = 0
    notes: list = field(default_factory=list)
    failures: int = 0

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def fail(self, example: dict) -> None:
        self.failures += 1
        if len(self.counterexamples) < MAX_COUNTEREXAMPLES:
            self.counterexamples.append(example)

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"{self.check}: {status} inputs={self.inputs_visited} "
                f"transcripts={self.transcripts_visited} failures={self.failures}")


def enumerate_randomness(plan: ProtocolPlan) -> list[tuple[tuple, Fraction]]:
    """Every transcript of ``plan`` with its exact probability."""
    space = randomness_space(plan)
    p = Fraction(1, space.size)
    return [(space.transcript(t), p) for t in range(space.size)]


def _run_all(plan: ProtocolPlan, x: PlayerInputs, space: RandomnessSpace):
    base = weighing_outcomes(plan, x)
    codes, raw = enumerate_views(base, space.perms, space.sides, plan.accept_outcome, plan.stop_on_accept)
    return codes, raw ^ np.uint8(plan.negate_output)


def _distribution(codes: np.ndarray) -> ViewDistribution:
    values, counts = np.unique(codes, return_counts=True)
    total = int(counts.sum())
    return ViewDistribution({decode_view(v): Fraction(int(c), total) for v, c in zip(values, counts)})


def view_distribution(plan: ProtocolPlan, x: Union[PlayerInputs, str]) -> ViewDistribution:
    if isinstance(x, str):
        x = PlayerInputs.parse(x)
    codes, _ = _run_all(plan, x, randomness_space(plan))
    return _distribution(codes)


def _arity(spec, plan) -> None:
    if spec.n != plan.n:
        raise SpecError(f"arity mismatch: spec has n={spec.n}, plan has n={plan.n}")


def _collapse_notes(report: VerificationReport, space: RandomnessSpace) -> None:
    report.notes.extend(space.collapsed)


def check_correctness(spec: Union[FunctionSpec, Negated], plan: ProtocolPlan) -> VerificationReport:
    _arity(spec, plan)
    report = VerificationReport("correctness")
    space = randomness_space(plan)
    _collapse_notes(report, space)
    for x in all_inputs(plan.n):
        expected = evaluate(spec, x)
        codes, out = _run_all(plan, x, space)
        report.inputs_visited += 1
        report.transcripts_visited += len(codes)
        bad = np.flatnonzero(out != expected)
        for t in bad[:1]:
            report.fail({
                "inputs": str(x),
                "expected": expected,
                "output": int(out[t]),
                "transcript": [list(p) for p in space.transcript(int(t))],
                "view": [o.label for o in decode_view(codes[t])],
                "transcripts_failing": int(len(bad)),
            })
        report.failures += max(0, len(bad) - 1)
    return report


def check_security(spec: Union[FunctionSpec, Negated], plan: ProtocolPlan) -> VerificationReport:
    """Views must be identically distributed for all inputs sharing an output."""
    _arity(spec, plan)
    report = VerificationReport("security")
    space = randomness_space(plan)
    _collapse_notes(report, space)
    classes: dict[int, list[tuple[PlayerInputs, ViewDistribution]]] = defaultdict(list)
    for x in all_inputs(plan.n):
        codes, _ = _run_all(plan, x, space)
        report.inputs_visited += 1
        report.transcripts_visited += len(codes)
        classes[evaluate(spec, x)].append((x, _distribution(codes)))

    pairwise = plan.n <= PAIRWISE_MAX_N
    if not pairwise:
        report.notes.append("compared each distribution with its output-class representative")
    for output, members in sorted(classes.items()):
        if pairwise:
            pairs = ((a, b) for i, a in enumerate(members) for b in members[i + 1:])
        else:
            pairs = ((members[0], b) for b in members[1:])
        for (x1, d1), (x2, d2) in pairs:
            if d1 != d2:
                report.fail({
                    "output": output,
                    "inputs": [str(x1), str(x2)],
                    "distributions": [d1.to_json(), d2.to_json()],
                })
    return report


def _ceil_half(n: int) -> int:
    return -(-n // 2)


def audit_resources(plan: ProtocolPlan) -> VerificationReport:
    """Recount resources from the plan's structure and check the worst-case bounds."""
    report = VerificationReport("resources")
    n = plan.n
    res = plan.resources

    def expect(what: str, actual, wanted) -> None:
        if actual != wanted:
            report.fail({"check": what, "actual": actual, "expected": wanted})

    def bound(what: str, actual, limit) -> None:
        if actual > limit:
            report.fail({"check": what, "actual": actual, "bound": limit})

    ref = plan.reference
    coins = (sum(h + l for h, l in plan.player_issue)
             + sum(b.heavy + b.light for b in plan.prepared_bags)
             + (ref.coins if ref is not None else 0))
    weighed = plan.weighing_bags
    comparisons = 1 if plan.kind in (ProtocolKind.AND, ProtocolKind.THRESHOLD) else len(weighed)
    recount = {
        "coins": coins,
        "bags": len(plan.prepared_bags),
        "comparisons_max": comparisons,
        "uses_custom_weight": plan.custom_weight is not None,
        "uses_pen": any(b.special for b in plan.prepared_bags),
    }
    for key, value in recount.items():
        expect(f"declared {key}", getattr(res, key), value)
    report.inputs_visited = 1

    # every scheduled comparison must carry n coin masses on each side
    if ref is not None:
        expect("reference w-units", ref.weight.w_units, n)
    for b in weighed:
        if plan.kind is ProtocolKind.SYMMETRIC:
            expect("prepared bag coin count", b.heavy + b.light, n)
        elif plan.kind is ProtocolKind.GENERAL and (b.target is None or len(b.target) != n):
            report.fail({"check": "bag target", "actual": b.target, "expected": f"{n}-bit assignment"})

    if plan.kind is ProtocolKind.AND:
        expect("P1 coins = 3n", coins, 3 * n)
        expect("P1 bags", len(plan.prepared_bags), 0)
        expect("P1 issue", list(plan.player_issue), [(1, 1)] * n)
    elif plan.kind is ProtocolKind.THRESHOLD:
        expect("P2 coins = 2n", coins, 2 * n)
        expect("P2 bags", len(plan.prepared_bags), 0)
        W = plan.custom_weight
        k2 = None if W is None else W.half_delta_units + 2 * n + 1
        if W is None or k2 % 2 or not 1 <= k2 // 2 <= n:
            report.fail({"check": "P2 custom weight = (k-1)w + (n-k+1)(w-delta) + delta/2",
                         "actual": None if W is None else list(W.as_tuple())})
    elif plan.kind is ProtocolKind.SYMMETRIC:
        m = len(weighed)
        expect("P3 coins = n(m+2)", coins, n * (m + 2))
        expect("P3 bags = m+1", len(plan.prepared_bags), m + 1)
        expect("P3 special bags", sum(b.special for b in plan.prepared_bags), 1)
        bound("P3 bags <= ceil(n/2)+1", len(plan.prepared_bags), _ceil_half(n) + 1)
        bound("P3 comparisons <= ceil(n/2)", comparisons, _ceil_half(n))
        bound("P3 coins <= n*ceil(n/2+2)", coins, n * math.ceil(n / 2 + 2))
    elif plan.kind is ProtocolKind.GENERAL:
        targets = [b.target for b in weighed if b.target is not None]
        wanted = [(max(p, q), max(p, q)) for p, q in ones_profile(targets, n)]
        expect("P4 issue = max(p_i, q_i)", [tuple(i) for i in plan.player_issue], wanted)
        expect("P4 coins = sum 2max(p_i,q_i) + n", coins, sum(2 * h for h, _ in wanted) + n)
        expect("P4 distinct bag targets", len(set(targets)), len(targets))
        bound("P4 bags <= 2^(n-1)", len(plan.prepared_bags), 2 ** (n - 1))
        bound("P4 comparisons <= 2^(n-1)", comparisons, 2 ** (n - 1))
        bound("P4 coins <= n(2^n+1)", coins, n * (2**n + 1))
    return report


def verify_all(spec, plan: ProtocolPlan, mode: str = "all") -> list[VerificationReport]:
    modes = ("correctness", "security", "resources") if mode == "all" else (mode,)
    reports = []
    for m in modes:
        if m == "correctness":
            reports.append(check_correctness(spec, plan))
        elif m == "security":
            reports.append(check_security(spec, plan))
        elif m == "resources":
            reports.append(audit_resources(plan))
        else:
            raise ValueError(f"unknown verification mode {m!r}")
    return reports
