"""Time the compiled lattice kernel against the numpy fallback.

Run: python benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import time

import numpy as np

from oscdecay import _kernels_py

try:
    from oscdecay import _kernels
except ImportError:
    _kernels = None

CASES = [
    # (label, ndim, npts, phase coef, phase expo, phase_kind, sym_kind, sym_b)
    ("1D quartic+quadratic", 1, 400_001, [1.0, 1.0], [2.0, 4.0], 0, 0, 0.0),
    ("2D quartic", 2, 1_201, [1.0], [4.0], 0, 0, 0.0),
    ("2D cubic, Bessel weight b=-1", 2, 1_201, [1.0], [3.0], 0, 1, -1.0),
    ("3D quadratic", 3, 101, [1.0], [2.0], 0, 0, 0.0),
]


def timed(fn, repeat):
    best, out = np.inf, None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print(f"{'case':32s} {'points':>10s} {'numpy s':>9s} {'compiled s':>11s} {'speedup':>8s} {'|diff|':>9s}")
    for label, nd, npts, coef, expo, pk, sk, sb in CASES:
        call = lambda mod: mod.lattice_sum(nd, npts, 0.01, 1.0, [0.3] * nd, 1e-3,
                                           np.array(coef), np.array(expo), pk, sk, sb, ())
        tp, vp = timed(lambda: call(_kernels_py), args.repeat)
        if _kernels is None:
            print(f"{label:32s} {npts ** nd:10d} {tp:9.3f} {'n/a':>11s}")
            continue
        tc, vc = timed(lambda: call(_kernels), args.repeat)
        diff = abs(vp[0] - vc[0])
        print(f"{label:32s} {npts ** nd:10d} {tp:9.3f} {tc:11.3f} {tp / tc:8.1f} {diff:9.2e}")


if __name__ == "__main__":
    main()
