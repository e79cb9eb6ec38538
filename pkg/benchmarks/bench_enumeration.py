"""Compare the numba and numpy enumeration kernels on full-transcript sweeps.

    python benchmarks/bench_enumeration.py [--repeat 5]
"""

import argparse
import time

import numpy as np

from balancempc import kernels
from balancempc.engine import plan_general, plan_symmetric, randomness_space, weighing_outcomes
from balancempc.functions import all_assignments, all_inputs


def workloads():
    rows4 = all_assignments(4)
    yield "P4 n=4, 8 bags (40320 orders)", plan_general(4, rows4[::2])
    yield "P4 n=4, 6 bags (720 orders)", plan_general(4, rows4[:6])
    yield "P3 n=8, |X|=4 (384 transcripts)", plan_symmetric(8, {1, 3, 5, 7})


def sweep(fn, plan, prepared):
    space = randomness_space(plan)
    total = 0
    for base in prepared:
        codes, raw = fn(base, space.perms, space.sides, int(plan.accept_outcome), plan.stop_on_accept)
        total += int(raw.sum())
    return total


def best_of(repeat, fn, *args):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        result = fn(*args)
        times.append(time.perf_counter() - t)
    return min(times), result


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    backends = [("numpy", kernels.enumerate_views_numpy)]
    if kernels.HAVE_NUMBA:
        backends.append(("numba", kernels.enumerate_views_numba))

    print(f"{'workload':36s} " + " ".join(f"{name:>10s}" for name, _ in backends) + "   speedup")
    for label, plan in workloads():
        prepared = [weighing_outcomes(plan, x) for x in all_inputs(plan.n)]
        results = []
        for name, fn in backends:
            sweep(fn, plan, prepared[:1])  # warm-up / JIT
            results.append(best_of(args.repeat, sweep, fn, plan, prepared))
        if len({r for _, r in results}) != 1:
            raise SystemExit(f"backends disagree on {label}")
        times = [t for t, _ in results]
        speedup = f"{times[0] / times[-1]:8.1f}x" if len(times) > 1 else ""
        print(f"{label:36s} " + " ".join(f"{t * 1e3:8.2f}ms" for t in times) + f"  {speedup}")


if __name__ == "__main__":
    main()
