"""Time the compiled kernels against the numpy fallback.

The last column is max |compiled - numpy| / max |numpy|; the mode sums
cancel in sign, so elementwise relative differences are not meaningful.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import time

import numpy as np

from bsgauss import _core_py
from bsgauss.basis import gauss_legendre_unit
from bsgauss.kernels import BAND, PAIR_NODES

try:
    from bsgauss import _core
except ImportError:
    _core = None


def _cases():
    rng = np.random.default_rng(0)
    x = rng.uniform(-4.0, 4.0, 2000)
    x1 = rng.uniform(-4.0, 4.0, 2000)
    d = rng.uniform(0.05, 3.0, 2000)
    kappa = np.sqrt(2.0 * (np.arange(200) + 1.5))
    nodes, weights = gauss_legendre_unit(PAIR_NODES)
    c = np.sqrt(2.0 * (np.arange(4000) + 1.5))
    return {
        "hermite_table(200, 2000 pts)": lambda m: m.hermite_table(200, x),
        "green_series(200 modes, 2000 pts)": lambda m: m.green_series(x, x1, d, kappa),
        "y_pair_gl(4000 rates)": lambda m: m.y_pair_gl(c, nodes, weights),
        "trace_rows(2048 rows)": lambda m: m.trace_rows(1.5, 2048, BAND, nodes, weights),
    }


def best_time(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args()
    if _core is None:
        print("compiled extension not built; only the numpy backend is available")
    print(f"{'kernel':36s} {'numpy [ms]':>11s} {'compiled [ms]':>14s} {'speedup':>8s} {'scaled diff':>13s}")
    for name, fn in _cases().items():
        t_py, ref = best_time(lambda: fn(_core_py), args.repeat)
        if _core is None:
            print(f"{name:36s} {1e3 * t_py:11.2f} {'-':>14s} {'-':>8s} {'-':>13s}")
            continue
        t_c, out = best_time(lambda: fn(_core), args.repeat)
        ref, out = np.asarray(ref), np.asarray(out)
        diff = np.max(np.abs(out - ref)) / np.max(np.abs(ref))
        print(f"{name:36s} {1e3 * t_py:11.2f} {1e3 * t_c:14.2f} {t_py / t_c:8.1f} {diff:13.1e}")


if __name__ == "__main__":
    main()
