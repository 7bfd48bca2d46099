#!/usr/bin/env python3
"""Benchmark the numba-compiled kernels against the pure-Python fallback.

Runs the tree-growth and counter kernels on identical inputs through both
backends and prints per-size timings plus speedups.  The compiled path is
skipped when numba is unavailable or MORI_DISABLE_NUMBA is set.

Usage: python benchmarks/bench_backends.py [--sizes 1e4,1e5,1e6] [--repeat 3]
"""

import argparse
import time

import numpy as np
from numpy.random import Generator, PCG64, SeedSequence

from mori import _kernels


def _best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_size(nm, m, beta, repeat):
    rng = Generator(PCG64(SeedSequence(12345)))
    u = rng.random(2 * (nm - 1))

    def make_arrays():
        return (
            np.zeros(nm + 1, np.int64),
            np.zeros(nm + 1, np.int64),
            np.zeros(nm + 1, np.int8),
            np.zeros(nm + 1, np.int64),
        )

    rows = []
    impls = [("python", _kernels.PURE_PYTHON)]
    if _kernels.BACKEND == "numba":
        impls.append(("numba", {
            "grow_tree": _kernels.grow_tree,
            "multigraph_counters": _kernels.multigraph_counters,
        }))

    grown = {}
    for name, impl in impls:
        heads, degrees, kinds, idxs = make_arrays()
        impl["grow_tree"](2, nm, beta, u, heads, degrees, kinds, idxs)  # warm/compile
        grow_t = _best_of(
            lambda: impl["grow_tree"](2, nm, beta, u, heads, degrees, kinds, idxs),
            repeat,
        )
        n = nm // m
        tails = (np.arange(2, nm + 1, dtype=np.int64) + m - 1) // m
        mheads = (heads[2:] + m - 1) // m
        impl["multigraph_counters"](tails, mheads, n)
        count_t = _best_of(lambda: impl["multigraph_counters"](tails, mheads, n), repeat)
        counters = impl["multigraph_counters"](tails, mheads, n)
        rows.append((name, grow_t, count_t))
        grown[name] = counters

    if len(grown) == 2 and grown["python"] != grown["numba"]:
        raise AssertionError(f"backend mismatch: {grown}")
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="1e4,1e5", help="tree sizes nm, comma list")
    ap.add_argument("--m", type=int, default=2)
    ap.add_argument("--beta", type=float, default=1.0)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    sizes = [int(float(s)) for s in args.sizes.split(",")]
    print(f"backend available: {_kernels.BACKEND}")
    print(f"{'nm':>10} {'backend':>8} {'grow (s)':>10} {'counters (s)':>13} {'ns/step':>9}")
    for nm in sizes:
        rows = bench_size(nm, args.m, args.beta, args.repeat)
        base = None
        for name, grow_t, count_t in rows:
            print(f"{nm:>10} {name:>8} {grow_t:>10.4f} {count_t:>13.4f} "
                  f"{grow_t / nm * 1e9:>9.0f}")
            if name == "python":
                base = (grow_t, count_t)
            elif base:
                print(f"{'':>10} {'speedup':>8} {base[0] / grow_t:>9.1f}x "
                      f"{base[1] / count_t:>12.1f}x")


if __name__ == "__main__":
    main()
