"""Timing comparison of the compiled and pure-numpy simulation kernels.

Runs the three hot batched kernels on identical inputs through both
backends and reports per-sample times plus the speedup.  Numbers are
best-of-N wall clock, so they are honest for the machine they ran on and
nothing else.

Usage:
    python benchmarks/bench_kernels.py [--sizes 4,6,8] [--block 512] [--repeats 5]
"""

import argparse
import time

import numpy as np

from randcluster.kernels import fallback
from randcluster.subsets import census_masks, pair_list

try:
    from randcluster.kernels import _core
except ImportError:
    _core = None


def make_inputs(n, block, seed=123):
    rng = np.random.default_rng(seed)
    pairs = pair_list(n)
    bits = (rng.random((block, len(pairs))) < 0.5).astype(np.uint8)
    pa = np.array([i - 1 for i, _ in pairs], dtype=np.int64)
    pb = np.array([j - 1 for _, j in pairs], dtype=np.int64)
    return bits, pa, pb


def best_of(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_backend(impl, n, block, repeats):
    bits, pa, pb = make_inputs(n, block)
    amps = impl.build_states(bits, pa, pb, n)
    masks = census_masks(n)
    times = {
        "build_states": best_of(lambda: impl.build_states(bits, pa, pb, n), repeats),
        "subset_purities": best_of(lambda: impl.subset_purities(amps, masks, n), repeats),
        "bipartition_negativities": best_of(
            lambda: impl.bipartition_negativities(amps, masks, n), repeats
        ),
    }
    return times


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="4,6,8", help="comma list of qubit counts")
    ap.add_argument("--block", type=int, default=512, help="samples per batch")
    ap.add_argument("--repeats", type=int, default=5, help="timing repeats (best kept)")
    args = ap.parse_args()

    sizes = [int(s) for s in args.sizes.split(",")]
    if _core is None:
        print("compiled extension not available; timing the fallback only")

    header = f"{'n':>3} {'kernel':<26} {'python us/sample':>18} {'compiled us/sample':>20} {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for n in sizes:
        py = bench_backend(fallback, n, args.block, args.repeats)
        cc = bench_backend(_core, n, args.block, args.repeats) if _core else None
        for kernel, t_py in py.items():
            us_py = 1e6 * t_py / args.block
            if cc:
                us_cc = 1e6 * cc[kernel] / args.block
                print(f"{n:>3} {kernel:<26} {us_py:>18.2f} {us_cc:>20.2f} {t_py / cc[kernel]:>8.1f}x")
            else:
                print(f"{n:>3} {kernel:<26} {us_py:>18.2f} {'-':>20} {'-':>9}")
    print(f"\nblock={args.block}, repeats={args.repeats}, best-of timing")


if __name__ == "__main__":
    main()
