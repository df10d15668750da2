"""Time the numpy and numba kernels on the same inputs.

    python benchmarks/bench_backends.py [--repeat 20]

Prints per-kernel timings for several truncation lengths and the largest
relative difference between the two backends' outputs.
"""

import argparse
import cmath
import math
import time

import numpy as np

from qmgamma import kernels
from qmgamma.combinatorics import gen_binom


def best_of(fn, repeat):
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def cases(n_terms):
    log_q = math.log(0.9)
    z = 1.3 + 0.7j
    a = -(cmath.exp(z * log_q) - 1.0)
    r = 3
    bz = np.array([gen_binom(z, j) for j in range(r + 1)], dtype=np.complex128)
    w = np.linspace(-2.0, 2.0, n_terms)
    return {
        "defining_series": (r, a, log_q, n_terms, bz),
        "qgamma_series": (a, log_q, n_terms),
        "deriv_series": (r, 0.5, log_q, n_terms),
        "weighted_log1m_qpow": (w, log_q),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=20)
    ap.add_argument("--sizes", type=int, nargs="*", default=[64, 512, 4096, 32768])
    args = ap.parse_args()

    np_k = kernels.NUMPY_KERNELS
    t0 = time.perf_counter()
    nb_k = kernels.build_numba_kernels()
    # first calls trigger compilation (or a cache load)
    for name, a in cases(16).items():
        nb_k[name](*a)
    print(f"numba compile/load: {time.perf_counter() - t0:.2f} s")
    print(f"{'kernel':<22}{'N':>7}{'numpy [us]':>13}{'numba [us]':>13}{'speedup':>9}{'rel diff':>12}")
    for n in args.sizes:
        for name, a in cases(n).items():
            t_np = best_of(lambda: np_k[name](*a), args.repeat)
            t_nb = best_of(lambda: nb_k[name](*a), args.repeat)
            u, v = complex(np_k[name](*a)), complex(nb_k[name](*a))
            diff = abs(u - v) / max(1.0, abs(u))
            print(f"{name:<22}{n:>7}{t_np * 1e6:>13.1f}{t_nb * 1e6:>13.1f}{t_np / t_nb:>9.1f}{diff:>12.2e}")


if __name__ == "__main__":
    main()
