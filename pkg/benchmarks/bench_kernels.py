"""Timing comparison of the compiled kernels against the numpy fallback.

Run as a script:

    python3 benchmarks/bench_kernels.py [--repeats 5]

Workloads: the multiplication table and conjugacy partition of the
symmetric group on six points (order 720), closure of a two-element
seed inside it, and a large heat-trace sum.  Each kernel is warmed once
so numba's compile time is not charged to the measurement.
"""

import argparse
import time
import timeit

import numpy as np

from sunadalab import _kernels as K
from sunadalab.permgrp import generate_group, parse_cycles


def _s6_elements():
    G = generate_group(6, [parse_cycles("(0 1 2 3 4 5)", 6), parse_cycles("(0 1)", 6)])
    return np.asarray([p.images for p in G.elements], dtype=np.int64)


def _bench(fn, args, repeats):
    fn(*args)  # warm-up / jit compile
    times = timeit.repeat(lambda: fn(*args), number=1, repeat=repeats)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    elems = _s6_elements()
    table = K.mul_table_numpy(elems)
    inv = np.asarray([int(np.where(table[i] == 0)[0][0]) for i in range(len(table))])
    seed = np.asarray([1, 2], dtype=np.int64)
    rng = np.random.default_rng(0)
    values = np.sort(rng.uniform(0.0, 10.0, size=200_000))
    mults = np.ones_like(values)
    t_grid = np.geomspace(1e-4, 1.0, 64)

    workloads = [
        ("mul_table (S6, 720 elements)", "mul_table", (elems,)),
        ("closure (2 seeds in S6)", "closure", (table, seed)),
        ("conjugacy_partition (S6)", "conjugacy_partition", (table, inv)),
        ("heat_sum (200k eigenvalues, 64 times)", "heat_sum", (values, mults, t_grid)),
    ]

    print(f"{'workload':<42}{'numpy':>12}{'numba':>12}{'speedup':>10}")
    start = time.perf_counter()
    for label, stem, call_args in workloads:
        numpy_fn = getattr(K, stem + "_numpy")
        t_numpy = _bench(numpy_fn, call_args, args.repeats)
        if K._HAVE_NUMBA:
            numba_fn = getattr(K, stem + "_numba")
            t_numba = _bench(numba_fn, call_args, args.repeats)
            ratio = f"{t_numpy / t_numba:9.1f}x"
            numba_col = f"{t_numba * 1e3:10.3f}ms"
        else:
            numba_col = f"{'absent':>12}"
            ratio = f"{'':>10}"
        print(f"{label:<42}{t_numpy * 1e3:10.3f}ms{numba_col}{ratio}")
    print(f"\ntotal wall time {time.perf_counter() - start:.1f}s, "
          f"active backend: {K.BACKEND}")


if __name__ == "__main__":
    main()
