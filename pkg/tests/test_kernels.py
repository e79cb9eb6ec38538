import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from balancempc import kernels
from balancempc.apparatus import RandomSource, ScaleOutcome
from balancempc.engine import execute, plan_general, plan_symmetric, randomness_space, weighing_outcomes
from balancempc.functions import all_inputs
from balancempc.mutants import without_pair_shuffle
from balancempc.engine import permutation_array

needs_numba = pytest.mark.skipif(not kernels.HAVE_NUMBA, reason="numba not installed")


@st.composite
def batches(draw):
    m = draw(st.integers(0, 5))
    base = np.array(draw(st.lists(st.integers(0, 2), min_size=m, max_size=m)), dtype=np.int8)
    perms = permutation_array(m) if m else np.zeros((1, 0), dtype=np.int64)
    n_sides = draw(st.integers(1, 4))
    sides = np.array(draw(st.lists(st.lists(st.integers(0, 1), min_size=m, max_size=m),
                                   min_size=n_sides, max_size=n_sides)), dtype=np.int8).reshape(n_sides, m)
    return base, perms, sides, draw(st.integers(0, 2)), draw(st.booleans())


@needs_numba
@settings(max_examples=150, deadline=None)
@given(batches())
def test_backends_agree(batch):
    base, perms, sides, accept, stop = batch
    c1, r1 = kernels.enumerate_views_numpy(base, perms.astype(np.int64), sides, accept, stop)
    c2, r2 = kernels.enumerate_views_numba(base, perms.astype(np.int64), sides, accept, stop)
    np.testing.assert_array_equal(c1, c2)
    np.testing.assert_array_equal(r1, r2)


def test_view_codec_round_trip():
    views = [(), (ScaleOutcome.BALANCED,), tuple(ScaleOutcome(i % 3) for i in range(9))]
    for v in views:
        assert kernels.decode_view(kernels.encode_view(v)) == v


@pytest.mark.parametrize("plan", [
    plan_symmetric(3, {1, 3}),
    plan_symmetric(4, {0, 3}),
    without_pair_shuffle(plan_symmetric(3, {2})),
    plan_general(3, {"100", "010", "001", "111"}),
], ids=["p3", "p3-n4", "p3-mutant", "p4"])
def test_kernel_matches_scalar_execution_per_transcript(plan):
    space = randomness_space(plan)
    for x in all_inputs(plan.n):
        codes, raw = kernels.enumerate_views(weighing_outcomes(plan, x), space.perms, space.sides,
                                             plan.accept_outcome, plan.stop_on_accept)
        for t in range(space.size):
            trace = execute(plan, x, RandomSource.from_transcript(space.transcript(t)))
            assert kernels.decode_view(codes[t]) == trace.view
            assert raw[t] == trace.raw_output


def test_env_flag_selects_numpy():
    env = dict(os.environ, BALANCEMPC_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", "import balancempc.kernels as k; print(k.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
