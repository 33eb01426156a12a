"""Numba vs numpy timings for the two hot kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5]

The numba path is warmed up once before timing so compile time is excluded
(it is reported separately). Results of both paths are compared as well.
"""
import argparse
import time

import numpy as np

from dipolar_discord import DimerParams, kernels, oracle
from dipolar_discord.oracle import _b_side_operators


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def bench(name, make_call, repeat):
    t0 = time.perf_counter()
    make_call("numba")()
    warm = time.perf_counter() - t0
    t_nb, out_nb = best_of(make_call("numba"), repeat)
    t_np, out_np = best_of(make_call("numpy"), repeat)
    diff = float(np.max(np.abs(out_nb - out_np)))
    print(f"{name:<28} numba {t_nb * 1e3:9.2f} ms   numpy {t_np * 1e3:9.2f} ms   "
          f"speedup {t_np / t_nb:6.1f}x   max|diff| {diff:.1e}   first call {warm:.2f} s")


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--nt", type=int, default=1000, help="temperatures in the scan")
    ap.add_argument("--neta", type=int, default=201, help="fields in the scan")
    ap.add_argument("--grid", type=int, default=256, help="Bloch-sphere grid size")
    args = ap.parse_args()

    xs = 1.0 / np.linspace(0.05, 20.0, args.nt)
    etas = np.linspace(-10.0, 10.0, args.neta)
    bench(f"scan_grid {args.nt}x{args.neta}",
          lambda b: lambda: kernels.scan_grid(-2.0, xs, etas, backend=b), args.repeat)

    rho = oracle.gibbs_general(DimerParams(-2.0, 0.7, 0.9), 1.3)
    rho_a, t_ops = _b_side_operators(rho)
    pol = np.linspace(0.0, np.pi, args.grid)
    azi = np.linspace(0.0, 2 * np.pi, args.grid, endpoint=False)
    bench(f"conditional_entropy {args.grid}^2",
          lambda b: lambda: kernels.conditional_entropy_grid(rho_a, t_ops, pol, azi, backend=b),
          args.repeat)

    # the oracle's refinement issues many 5x5 calls, where per-call overhead dominates
    stencil = np.arange(-2.0, 3.0)

    def refinement(b):
        def run():
            return np.array([kernels.conditional_entropy_grid(rho_a, t_ops, 0.7 + 1e-3 * k * stencil,
                                                              1.1 + 1e-3 * k * stencil, backend=b)
                             for k in range(120)])
        return run

    bench("refinement 120 x 5x5", refinement, args.repeat)


if __name__ == "__main__":
    main()
