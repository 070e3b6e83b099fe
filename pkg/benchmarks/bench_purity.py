#!/usr/bin/env python3
"""Benchmark the compiled purity kernel against the numpy fallback.

Times the balanced-average purity (the hot loop of every sampling run)
and the single-bipartition purity on identical random batches.

Usage: python benchmarks/bench_purity.py [--sizes 6,8,10] [--batch 1024]
"""

import argparse
import time

import numpy as np

from entstats._kernels import BACKEND, fallback
from entstats._kernels import purity_fixed_batch, purity_weighted_batch
from entstats.purity import _balanced_tables, _src_table
from entstats.states import EnsembleSpec, sample_block


def timeit(fn, *args, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="6,8,10")
    parser.add_argument("--batch", type=int, default=1024)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    if BACKEND != "cython":
        print("note: compiled kernel not built; comparing fallback against itself")
    print(f"{'n':>3} {'kernel':>22} {'piME/state':>12} {'piA/state':>12} {'speedup':>8}")
    for n in sizes:
        amps = sample_block(EnsembleSpec.haar(n, seed=0), 0, args.batch)
        srcs, weights, rows = _balanced_tables(n, True)
        src, rows1 = _src_table(n, (1 << (n // 2)) - 1)

        t_me_c, me_c = timeit(purity_weighted_batch, amps, srcs, weights, rows)
        t_a_c, a_c = timeit(purity_fixed_batch, amps, src, rows1)
        t_me_np, me_np = timeit(fallback.purity_weighted_batch, amps, srcs, weights, rows)
        t_a_np, a_np = timeit(fallback.purity_fixed_batch, amps, src, rows1)

        if np.max(np.abs(me_c - me_np)) > 1e-12 or np.max(np.abs(a_c - a_np)) > 1e-12:
            raise SystemExit(f"backends disagree at n={n}")

        per = 1e6 / args.batch
        print(f"{n:>3} {BACKEND + ' (active)':>22} {t_me_c * per:>10.1f}us {t_a_c * per:>10.1f}us "
              f"{t_me_np / t_me_c:>7.1f}x")
        print(f"{'':>3} {'numpy fallback':>22} {t_me_np * per:>10.1f}us {t_a_np * per:>10.1f}us")
    print("backends agree to 1e-12 on every batch")


if __name__ == "__main__":
    main()
