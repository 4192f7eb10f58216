"""Benchmark the numba kernels against the pure-numpy fallback.

Run: python3 benchmarks/bench_kernels.py [--sizes 1000 100000] [--repeat 5]

Also times one end-to-end oracle solve in a subprocess per backend, so the
``WAVEBASIS_DISABLE_NUMBA`` flag is honoured at import time.
"""
from __future__ import annotations

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from wavebasis.kernels import chain_product_numba, chain_product_numpy, chain_states_numba, chain_states_numpy


def _best(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def _steps(n, rng):
    # near-rotation step matrices keep the chain bounded
    theta = rng.uniform(0, 0.01, n)
    A = np.empty((n, 2, 2))
    A[:, 0, 0] = np.cos(theta)
    A[:, 0, 1] = np.sin(theta)
    A[:, 1, 0] = -np.sin(theta)
    A[:, 1, 1] = np.cos(theta)
    return A


_SOLVE = (
    "import time; from wavebasis.oracle import numerov_eigensolve; "
    "from wavebasis.profiles import SingularPowerLaw; "
    "numerov_eigensolve(SingularPowerLaw(1, 0.5), n=1); "
    "t = time.perf_counter(); r = numerov_eigensolve(SingularPowerLaw(1, 0.5), n=0); "
    "print(time.perf_counter() - t, r.E)"
)


def _solve_time(disable):
    env = dict(os.environ)
    env["WAVEBASIS_DISABLE_NUMBA"] = "1" if disable else "0"
    out = subprocess.run([sys.executable, "-c", _SOLVE], env=env, capture_output=True, text=True, check=True)
    t, E = out.stdout.split()
    return float(t), float(E)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[1_000, 10_000, 100_000, 1_000_000])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--skip-solve", action="store_true", help="skip the end-to-end oracle timing")
    args = ap.parse_args(argv)

    rng = np.random.default_rng(0)
    v0 = np.array([1.0, 0.0])
    warm = _steps(8, rng)
    chain_states_numba(warm, v0)  # compile outside the timed region
    chain_product_numba(warm)

    print(f"{'kernel':<14}{'n':>10}{'numba [ms]':>14}{'numpy [ms]':>14}{'speedup':>10}{'max diff':>12}")
    for n in args.sizes:
        A = _steps(n, rng)
        for name, fast, slow in (
            ("chain_states", lambda: chain_states_numba(A, v0), lambda: chain_states_numpy(A, v0)),
            ("chain_product", lambda: chain_product_numba(A), lambda: chain_product_numpy(A)),
        ):
            tf = _best(fast, args.repeat)
            ts = _best(slow, args.repeat)
            diff = float(np.max(np.abs(fast() - slow())))
            print(f"{name:<14}{n:>10}{1e3 * tf:>14.3f}{1e3 * ts:>14.3f}{ts / tf:>10.1f}{diff:>12.2e}")

    if not args.skip_solve:
        tn, En = _solve_time(disable=False)
        tp, Ep = _solve_time(disable=True)
        print(f"\nsingular-well ground state: numba {tn:.2f} s, numpy {tp:.2f} s, |dE| = {abs(En - Ep):.1e}")


if __name__ == "__main__":
    main()
