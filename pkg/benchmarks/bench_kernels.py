"""Time each kernel on its numba and numpy paths.

    python benchmarks/bench_kernels.py [--repeat 20]
"""
import argparse
import timeit

import numpy as np

from entire_symmetry import _kernels


def _cases(rng):
    def rand(n):
        return rng.normal(size=n) + 1j * rng.normal(size=n)

    a, b = rand(65), rand(65)
    inner = rand(65)
    inner[0] = 0
    poly, pts = rand(33), rand(4096)
    roots_poly, guesses = rand(25), rand(24)
    cloud = rand(800)
    return {
        "cauchy_product (N=64)": ("cauchy_product", (a, b)),
        "substitute (N=64)": ("substitute", (a, inner)),
        "horner (deg 32, 4096 pts)": ("horner", (poly, pts)),
        "aberth (deg 24)": ("aberth", (roots_poly, guesses, 1e-12, 500)),
        "min_pairwise_distance (800 pts)": ("min_pairwise_distance", (cloud,)),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args()
    if _kernels.numba is None:
        raise SystemExit("numba is not installed; nothing to compare")
    rng = np.random.default_rng(0)
    print(f"{'kernel':34s} {'numba [ms]':>11s} {'numpy [ms]':>11s} {'speedup':>8s}")
    for label, (name, call_args) in _cases(rng).items():
        nb = getattr(_kernels, f"{name}_nb")
        py = getattr(_kernels, f"{name}_np")
        nb(*call_args)  # compile
        t_nb = min(timeit.repeat(lambda: nb(*call_args), number=1, repeat=args.repeat)) * 1e3
        t_np = min(timeit.repeat(lambda: py(*call_args), number=1, repeat=args.repeat)) * 1e3
        print(f"{label:34s} {t_nb:11.3f} {t_np:11.3f} {t_np / t_nb:7.1f}x")


if __name__ == "__main__":
    main()
