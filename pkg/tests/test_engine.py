import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from balancempc.apparatus import ProtocolIntegrityError, RandomSource, ScaleOutcome, Weight
from balancempc.engine import (
    BagSpec,
    ProtocolKind,
    compile_spec,
    deposit_matrix,
    execute,
    plan_and,
    plan_general,
    plan_symmetric,
    plan_threshold,
)
from balancempc.functions import (
    And,
    SpecError,
    Symmetric,
    Threshold,
    TruthTable,
    all_assignments,
    all_inputs,
    evaluate,
)
from balancempc.verification import enumerate_randomness

XOR3_ONES = {"100", "010", "001", "111"}
B, L, R = ScaleOutcome.BALANCED, ScaleOutcome.LEFT_HEAVIER, ScaleOutcome.RIGHT_HEAVIER


def runs(plan, x):
    """Scalar execution over every enumerated transcript."""
    return [execute(plan, x, RandomSource.from_transcript(t)) for t, _ in enumerate_randomness(plan)]


def test_plan_and():
    p = plan_and(2)
    assert (p.resources.coins, p.resources.comparisons_max) == (6, 1)
    p = plan_and(3)
    assert (p.resources.coins, p.resources.bags, p.resources.comparisons_max) == (9, 0, 1)
    p = plan_and(1)
    assert [execute(p, x, RandomSource.seeded(0)).output for x in ("0", "1")] == [0, 1]
    with pytest.raises(SpecError):
        plan_and(0)


def test_plan_threshold_custom_weight():
    p = plan_threshold(3, 2)
    # 1*w + 2*(w - delta) + delta/2
    assert p.custom_weight == Weight(3, -4 + 1)
    assert p.resources.uses_custom_weight and p.resources.coins == 6
    assert "uses a custom weight" in p.notes
    one = plan_threshold(1, 1)
    assert one.custom_weight == Weight(1, -1)
    assert [execute(one, x, RandomSource.seeded(0)).view for x in ("0", "1")] == [(R,), (L,)]
    with pytest.raises(SpecError):
        plan_threshold(3, 4)


@pytest.mark.parametrize("n", range(1, 8))
def test_threshold_majority(n):
    p = plan_threshold(n, n // 2 + 1)
    for x in all_inputs(n):
        majority = int(sum(x.bits) > n - sum(x.bits))
        assert execute(p, x, RandomSource.seeded(0)).output == majority


def test_plan_symmetric_xor3():
    p = plan_symmetric(3, {1, 3})
    assert p.weighing_bags == (BagSpec(1, 2), BagSpec(3, 0))
    assert sum(b.special for b in p.prepared_bags) == 1
    assert p.resources.coins == 3 * (2 + 2) == 12
    assert p.resources.comparisons_max == 2 and not p.negate_output
    assert "uses a pen" in p.notes


def test_plan_symmetric_complement():
    p = plan_symmetric(4, {0, 1, 3, 4})
    assert p.negate_output and p.weighing_bags == (BagSpec(2, 2),)
    for x in all_inputs(4):
        assert {t.output for t in runs(p, x)} == {evaluate(Symmetric(4, {0, 1, 3, 4}), x)}


def test_plan_symmetric_constant_one():
    p = plan_symmetric(3, range(4))
    assert p.negate_output and p.weighing_bags == ()
    assert p.resources.comparisons_max == 0 and p.resources.bags == 1
    for x in all_inputs(3):
        t = execute(p, x, RandomSource.seeded(5))
        assert t.output == 1 and t.view == ()


def test_plan_symmetric_tie_keeps_original():
    # |X| == (n+1)/2 exactly: no switch
    p = plan_symmetric(3, {0, 1})
    assert not p.negate_output and len(p.weighing_bags) == 2


def test_plan_general_xor3():
    p = plan_general(3, XOR3_ONES)
    assert [b.target for b in p.prepared_bags] == ["100", "010", "001", "111"]
    assert p.player_issue == ((2, 2),) * 3
    assert p.resources.coins == 15 and p.resources.bags == 4
    assert deposit_matrix(p)["players"][0]["x=1"] == ["heavy", "light", "light", "heavy"]


def test_plan_general_empty_and_complement():
    p = plan_general(2, set())
    assert p.prepared_bags == () and p.resources.comparisons_max == 0
    assert all(execute(p, x, RandomSource.seeded(0)).output == 0 for x in all_inputs(2))
    full = plan_general(2, set(all_assignments(2)) - {"01"})
    assert full.negate_output and [b.target for b in full.prepared_bags] == ["01"]
    tie = plan_general(2, {"00", "11"})
    assert not tie.negate_output and len(tie.prepared_bags) == 2


def test_plan_general_malformed():
    with pytest.raises(SpecError):
        plan_general(2, {"1"})


def test_compile_dispatch():
    p = compile_spec(TruthTable(3, {"111"}))
    assert p.kind is ProtocolKind.AND and p.resources.coins == 9
    xor = compile_spec(TruthTable(3, XOR3_ONES))
    assert xor.kind is ProtocolKind.SYMMETRIC
    assert xor.resources.cost_key() < plan_general(3, XOR3_ONES).resources.cost_key()
    p = compile_spec(Threshold(5, 3))
    assert p.kind is ProtocolKind.THRESHOLD and p.resources.comparisons_max == 1
    assert compile_spec(And(4)).kind is ProtocolKind.AND
    assert compile_spec(TruthTable(2, {"10"})).kind is ProtocolKind.GENERAL
    # NOT on one player: general protocol needs one bag and no pen
    assert compile_spec(TruthTable(1, {"0"})).kind is ProtocolKind.GENERAL


def test_execute_and_examples():
    p = plan_and(2)
    t = execute(p, "11", RandomSource.seeded(0))
    assert t.view == (B,) and t.output == 1
    t = execute(p, "10", RandomSource.seeded(0))
    assert t.view == (R,) and t.output == 0
    assert t.events[0].left == Weight(2, -2)


def test_execute_symmetric_example():
    p = plan_symmetric(2, {1})
    traces = runs(p, "10")
    assert len(traces) == 2
    assert all(t.view == (B,) and t.output == 1 for t in traces)
    assert {t.transcript for t in traces} == {((0,), (0, 1)), ((0,), (1, 0))}


def test_execute_symmetric_seeded_records_post_shuffle():
    p = plan_symmetric(3, {1, 3})
    t = execute(p, "110", RandomSource.seeded(11))
    assert t.output == 0 and len(t.view) == 2
    # bag order, then pair shuffle + post-weighing shuffle per round
    assert len(t.transcript) == 1 + 2 * 2


def test_execute_arity_and_issue_checks():
    with pytest.raises(SpecError):
        execute(plan_and(3), "11", RandomSource.seeded(0))
    from dataclasses import replace
    starved = replace(plan_general(3, XOR3_ONES), player_issue=((1, 1),) * 3)
    with pytest.raises(ProtocolIntegrityError):
        execute(starved, "000", RandomSource.seeded(0))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_general_deposit_round_trip(n):
    # the bag for b holds n heavy coins exactly when x == b
    p = plan_general(n, all_assignments(n)[: 2 ** (n - 1)])
    for x in all_inputs(n):
        for trace in runs(p, x)[:3]:
            balanced = [e for e in trace.events if e.outcome is B]
            assert len(balanced) == int(str(x) in {b.target for b in p.prepared_bags})
            for e in balanced:
                assert e.left == Weight(n, 0)


specs = st.integers(1, 4).flatmap(lambda n: st.one_of(
    st.just(And(n)),
    st.integers(1, n).map(lambda k: Threshold(n, k)),
    st.sets(st.integers(0, n)).map(lambda xs: Symmetric(n, xs)),
    st.sets(st.sampled_from(all_assignments(n))).map(lambda o: TruthTable(n, o)),
))


@settings(max_examples=60, deadline=None)
@given(specs, st.data())
def test_compiled_plans_correct_and_well_formed(spec, data):
    plan = compile_spec(spec)
    x = data.draw(st.sampled_from(all_inputs(spec.n)))
    for trace in runs(plan, x):
        assert trace.output == evaluate(spec, x)
        assert sum(o is B for o in trace.view) <= 1
        assert len(trace.view) <= plan.resources.comparisons_max
        if plan.kind is not ProtocolKind.SYMMETRIC:
            assert len(trace.view) == plan.resources.comparisons_max
        for e in trace.events:
            assert e.left.w_units == e.right.w_units == spec.n


@pytest.mark.parametrize("n", range(1, 9))
def test_symmetric_bounds(n):
    half = math.ceil(n / 2)
    for r in range(n + 2):
        for xs in itertools.islice(itertools.combinations(range(n + 1), r), 20):
            res = plan_symmetric(n, xs).resources
            assert res.bags <= half + 1 and res.comparisons_max <= half
            assert res.coins <= n * math.ceil(n / 2 + 2)


def test_seeded_execution_deterministic():
    p = plan_general(3, XOR3_ONES)
    a = execute(p, "101", RandomSource.seeded(42))
    b = execute(p, "101", RandomSource.seeded(42))
    assert a == b
