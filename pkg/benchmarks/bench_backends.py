#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-numpy fallback.

Times the three hot kernels on representative shapes plus one end-to-end
Monte Carlo slice, and prints a speedup table. Usage:

    python3 benchmarks/bench_backends.py [--trials 2000]
"""

import argparse
import time

import numpy as np

from matconc import available_backends, hermitian_bounded
from matconc._backend import set_backend
from matconc.linalg import _start_vector
from matconc.montecarlo import estimate_tail


def _bench(fn, min_time=0.25):
    # warm up, then repeat until the budget is filled
    fn()
    count = 0
    start = time.perf_counter()
    while True:
        fn()
        count += 1
        elapsed = time.perf_counter() - start
        if elapsed >= min_time:
            return elapsed / count


def kernel_cases(rng):
    n, d = 400, 4
    xs = np.ascontiguousarray(
        rng.standard_normal((n, d, d)) + 1j * rng.standard_normal((n, d, d))
    ) * 0.2
    mu = np.zeros((d, d), dtype=np.complex128)
    stack = xs[:100]
    v0 = _start_vector(d)

    def with_backend(backend):
        return {
            f"chain_product(n={n}, d={d})": lambda: backend.chain_product(xs, 1.0 / n),
            f"doob_increments(n={n}, d={d})": lambda: backend.doob_increments(
                xs, mu, 1.0 / n
            ),
            f"spectral_norms(100 x {d}x{d})": lambda: backend.spectral_norms(
                stack, v0, 10 * d, 1e-12, 1e-10
            ),
        }

    return with_backend


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=2000,
                        help="Monte Carlo trials for the end-to-end case")
    args = parser.parse_args()

    names = available_backends()
    if "compiled" not in names:
        print("compiled backend not built; nothing to compare")
        return

    rng = np.random.default_rng(0)
    cases = kernel_cases(rng)
    results = {}
    for name in ("python", "compiled"):
        backend = set_backend(name)
        for label, fn in cases(backend).items():
            results.setdefault(label, {})[name] = _bench(fn)

    dist = hermitian_bounded(4, 1.0)
    grid = [0.0, 0.1, 0.2, 0.4]
    for name in ("python", "compiled"):
        set_backend(name)
        start = time.perf_counter()
        estimate_tail(dist, 100, args.trials, grid, seed=1, workers=1)
        results.setdefault(f"estimate_tail(n=100, trials={args.trials})", {})[name] = (
            time.perf_counter() - start
        )
    set_backend("compiled")

    width = max(len(k) for k in results) + 2
    print(f"{'case':<{width}}{'python':>12}{'compiled':>12}{'speedup':>9}")
    for label, times in results.items():
        py, comp = times["python"], times["compiled"]
        print(f"{label:<{width}}{py*1e3:>10.3f}ms{comp*1e3:>10.3f}ms{py/comp:>8.1f}x")

    # sanity: both backends agree on the kernels they just timed
    xs = np.ascontiguousarray(
        rng.standard_normal((50, 4, 4)) + 1j * rng.standard_normal((50, 4, 4))
    )
    py = set_backend("python").chain_product(xs, 0.02)
    comp = set_backend("compiled").chain_product(xs, 0.02)
    agreement = float(np.abs(py - comp).max())
    print(f"\nbackend agreement (chain_product, max abs diff): {agreement:.2e}")
    assert agreement < 1e-12


if __name__ == "__main__":
    main()
