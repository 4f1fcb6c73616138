#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Times the two hot paths on a mid-size worst-case instance:

  * chain stepping (one XOR + popcount per proposal), and
  * the Gray-code distance table over all 2^k messages.

Usage: python benchmarks/bench_chain.py [--steps N] [--m M] [--r R]
"""

import argparse
import time

import numpy as np

import rmgibbs
from rmgibbs import _kernels_py
from rmgibbs.adversary import build_instance
from rmgibbs.channel import chain_rng


def time_chain(kernel_cls, model, steps: int, chunk: int = 1 << 16) -> float:
    kern = kernel_cls(model._row_ints, model.n, model._y_int, 0, model.log_theta)
    rng = chain_rng(1234)
    dist_rec = np.empty(chunk, np.int64)
    flip_rec = np.empty(chunk, np.int64)
    state_rec = np.empty(chunk, np.uint64)
    t0 = time.perf_counter()
    done = 0
    while done < steps:
        c = min(chunk, steps - done)
        idx = rng.integers(0, model.k, size=c, dtype=np.int64)
        u = rng.random(c)
        kern.run_chunk(idx, u, dist_rec[:c], flip_rec[:c], state_rec[:c])
        done += c
    return time.perf_counter() - t0


def time_table(table_fn, model, repeats: int = 3) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        table_fn(model._row_ints, model.n, model._y_int, model.k)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--steps", type=int, default=1_000_000)
    parser.add_argument("--m", type=int, default=10)
    parser.add_argument("--r", type=int, default=2)
    parser.add_argument("--table-m", type=int, default=5, dest="table_m")
    parser.add_argument("--table-r", type=int, default=2, dest="table_r")
    args = parser.parse_args()

    inst = build_instance(args.m, args.r, p=0.25)
    model = inst.model()
    print(f"chain: RM({args.r},{args.m}) worst case, k={model.k}, n={model.n}, "
          f"{args.steps} steps")

    t_pure = time_chain(_kernels_py.GibbsKernel, model, args.steps)
    print(f"  pure-python  {args.steps / t_pure:>12,.0f} steps/s   ({t_pure:.3f}s)")
    if rmgibbs.HAVE_COMPILED:
        from rmgibbs import _kernels

        t_fast = time_chain(_kernels.GibbsKernel, model, args.steps)
        print(f"  compiled     {args.steps / t_fast:>12,.0f} steps/s   ({t_fast:.3f}s)")
        print(f"  speedup      {t_pure / t_fast:12.1f}x")
    else:
        print("  compiled extension not built; showing fallback only")

    tab = build_instance(args.table_m, args.table_r, p=0.25).model()
    n_states = 1 << tab.k
    print(f"distance table: RM({args.table_r},{args.table_m}), k={tab.k} "
          f"({n_states} states), n={tab.n}")
    t_pure = time_table(_kernels_py.distance_table, tab)
    print(f"  pure-python  {n_states / t_pure:>12,.0f} states/s  ({t_pure:.3f}s)")
    if rmgibbs.HAVE_COMPILED:
        from rmgibbs import _kernels

        t_fast = time_table(_kernels.distance_table, tab)
        print(f"  compiled     {n_states / t_fast:>12,.0f} states/s  ({t_fast:.3f}s)")
        print(f"  speedup      {t_pure / t_fast:12.1f}x")


if __name__ == "__main__":
    main()
