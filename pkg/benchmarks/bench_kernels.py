"""Compare the compiled kernels with the pure-Python fallback.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import timeit

import numpy as np

from mobius_sense import _kernels_py
from mobius_sense.mobius import _PASCAL

try:
    from mobius_sense import _kernels
except ImportError:
    _kernels = None


def cases(rng):
    a, b, c, d = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    for k in (5, 15, 30):
        yield f"mobius_coeff_matrix k={k}", "mobius_coeff_matrix", (a, b, c, d, k, _PASCAL)
    for k, n in ((5, 5), (15, 5), (15, 20)):
        coeffs = np.ascontiguousarray(
            (rng.standard_normal((k + 1, n * n)) + 1j * rng.standard_normal((k + 1, n * n))))
        yield f"horner_hom k={k} n={n}", "horner_hom", (coeffs, 0.3 + 0.2j, -0.7j)
    for k in (5, 30):
        w = rng.random(k + 1)
        yield f"abs_power_sum k={k}", "abs_power_sum", (0.4, 0.9, w)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    print(f"{'kernel':32s} {'python [us]':>12s} {'compiled [us]':>14s} {'speedup':>8s}")
    for label, name, params in cases(rng):
        fpy = getattr(_kernels_py, name)
        n = 200
        tpy = min(timeit.repeat(lambda: fpy(*params), number=n, repeat=args.repeat)) / n
        if _kernels is None:
            print(f"{label:32s} {tpy * 1e6:12.2f} {'n/a':>14s} {'n/a':>8s}")
            continue
        fc = getattr(_kernels, name)
        tc = min(timeit.repeat(lambda: fc(*params), number=n, repeat=args.repeat)) / n
        print(f"{label:32s} {tpy * 1e6:12.2f} {tc * 1e6:14.2f} {tpy / tc:8.1f}x")


if __name__ == "__main__":
    main()
