"""Benchmark the joint-quadrature-density kernel: numba vs pure numpy.

The quadratic form t(x)^T rho t(x) evaluated over large sample batches is
the hot loop of the Monte-Carlo sampler.  This script times both backends
on representative workloads (the normalization grid and rejection-sampler
sized batches) and reports the speedup.

Usage: python benchmarks/bench_kernels.py [--points N] [--repeats K]
"""

import argparse
import time

import numpy as np

from eprdistill import ChannelParams, HilbertConfig, nla_catalysis, tmsv_state
from eprdistill._kernels import (
    hermite_functions,
    pdf_quadratic_form_numba,
    pdf_quadratic_form_numpy,
)


def representative_state():
    cfg = HilbertConfig(3, 2)
    epr = tmsv_state(0.135, cfg)
    distilled, _ = nla_catalysis(epr, ChannelParams(tau=1.0, r=0.1, eta_ancilla=0.65))
    return distilled


def time_backend(func, rho_real, psi_a, psi_b, repeats):
    best = np.inf
    for _ in range(repeats):
        start = time.perf_counter()
        func(rho_real, psi_a, psi_b)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--points", type=int, default=200_000)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    state = representative_state()
    rho_real = np.real(state.elements).copy()
    rng = np.random.default_rng(0)
    xs = rng.normal(scale=1.2, size=args.points)
    ys = rng.normal(scale=1.2, size=args.points)
    psi_a = hermite_functions(state.config.n_max, xs)
    psi_b = hermite_functions(state.config.n_max, ys)

    print(f"kernel workload: dim {rho_real.shape[0]}, {args.points} points, "
          f"best of {args.repeats}")
    t_numpy = time_backend(pdf_quadratic_form_numpy, rho_real, psi_a, psi_b, args.repeats)
    print(f"  numpy : {t_numpy * 1e3:9.2f} ms "
          f"({args.points / t_numpy / 1e6:6.1f} M points/s)")

    if pdf_quadratic_form_numba is None:
        print("  numba : unavailable")
        return
    pdf_quadratic_form_numba(rho_real, psi_a[:, :16], psi_b[:, :16])  # compile
    t_numba = time_backend(pdf_quadratic_form_numba, rho_real, psi_a, psi_b, args.repeats)
    print(f"  numba : {t_numba * 1e3:9.2f} ms "
          f"({args.points / t_numba / 1e6:6.1f} M points/s)")
    print(f"  speedup: {t_numpy / t_numba:.2f}x")

    check_numpy = pdf_quadratic_form_numpy(rho_real, psi_a[:, :100], psi_b[:, :100])
    check_numba = pdf_quadratic_form_numba(rho_real, psi_a[:, :100], psi_b[:, :100])
    print(f"  max |numpy - numba|: {np.max(np.abs(check_numpy - check_numba)):.2e}")


if __name__ == "__main__":
    main()
