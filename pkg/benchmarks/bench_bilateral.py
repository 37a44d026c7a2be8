#!/usr/bin/env python3
"""Timing comparison of the two bilateral filter backends.

Runs the compiled kernel and the pure-numpy fallback on the same inputs at
the pipeline's default settings (sigma_spatial 16, sigma_range 3/255,
window radius 32) and reports per-image wall time plus the worst pixel
disagreement.

Usage: python benchmarks/bench_bilateral.py [--sizes 64,128,256] [--reps 3]
"""

import argparse
import time

import numpy as np

from mefuse.enhance import HAVE_COMPILED, bilateral_filter


def best_of(fn, reps):
    best = float("inf")
    for _ in range(reps):
        start = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - start)
    return best, result


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="64,128,256,512",
                        help="comma-separated square image sizes")
    parser.add_argument("--reps", type=int, default=3,
                        help="repetitions per measurement (best is kept)")
    parser.add_argument("--sigma-spatial", type=float, default=16.0)
    parser.add_argument("--sigma-range", type=float, default=3.0 / 255.0)
    args = parser.parse_args(argv)

    if not HAVE_COMPILED:
        print("note: compiled kernel unavailable, timing the fallback only")

    sizes = [int(s) for s in args.sizes.split(",")]
    rng = np.random.default_rng(42)
    header = f"{'size':>6} {'numpy [s]':>12} {'compiled [s]':>13} {'speedup':>8} {'max diff':>10}"
    print(header)
    print("-" * len(header))
    for size in sizes:
        lum = rng.random((size, size))
        t_np, out_np = best_of(
            lambda: bilateral_filter(lum, args.sigma_spatial, args.sigma_range,
                                     impl="numpy"),
            args.reps)
        if HAVE_COMPILED:
            t_c, out_c = best_of(
                lambda: bilateral_filter(lum, args.sigma_spatial, args.sigma_range,
                                         impl="compiled"),
                args.reps)
            diff = float(np.max(np.abs(out_c - out_np)))
            print(f"{size:>6} {t_np:>12.3f} {t_c:>13.3f} {t_np / t_c:>7.1f}x {diff:>10.1e}")
        else:
            print(f"{size:>6} {t_np:>12.3f} {'-':>13} {'-':>8} {'-':>10}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
