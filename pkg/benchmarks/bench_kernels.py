"""Compare the numba and numpy backends on the batched Z[zeta] kernels.

Usage: python3 benchmarks/bench_kernels.py [--repeat 5]

Inputs are the real PG_12 matrix numerators, so the shapes are the ones the
fix-line and node searches actually use.
"""

import argparse
import time

import numpy as np

from k3pencils import kernels
from k3pencils.groups import build_projective_group


def best_of(fn, repeat):
    fn()  # warm-up, includes JIT compilation for numba
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--kind", default="I", choices=("T", "O", "I"))
    args = ap.parse_args()

    g = build_projective_group(args.kind)
    mats = g.numerators
    rng = np.random.default_rng(0)
    vecs = rng.integers(-3, 4, size=(mats.shape[0], 4, kernels.DEGREE), dtype=np.int64)
    shifted = np.roll(mats, 1, axis=0)

    cases = {
        "matmul": lambda b: kernels.matmul(mats, shifted, backend=b),
        "matvec": lambda b: kernels.matvec(mats, vecs, backend=b),
        "proportional_rows": lambda b: kernels.proportional_rows(vecs, vecs, backend=b),
    }
    print(f"group {args.kind}: {mats.shape[0]} matrices, default backend {kernels.BACKEND}")
    print(f"{'kernel':<20}{'numpy [ms]':>12}{'numba [ms]':>12}{'speed-up':>10}")
    for name, fn in cases.items():
        assert np.array_equal(fn("numpy"), fn("numba")), f"{name}: backends disagree"
        t_np = best_of(lambda: fn("numpy"), args.repeat)
        t_nb = best_of(lambda: fn("numba"), args.repeat)
        print(f"{name:<20}{t_np * 1e3:>12.2f}{t_nb * 1e3:>12.2f}{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
