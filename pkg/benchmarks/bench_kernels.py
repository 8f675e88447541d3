#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Times the cross-talk matrix build, the derivative-matrix build and the
matched-bank construction on a few frame sizes, checks that both backends
agree, and prints a speedup table.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import math
import time

import numpy as np

import radcom._kernels_numpy as kernels_numpy
from radcom.estgrid import make_estimation_grid
from radcom.frame import make_frame_config
from radcom.otfs import delay_tap_count, matched_bank

try:
    import radcom._kernels_numba as kernels_numba
except ImportError:
    kernels_numba = None


def _time(fn, repeat):
    best = math.inf
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_matrix_kernels(repeat):
    print(f"{'kernel':<34}{'size':>12}{'numpy':>12}{'numba':>12}{'speedup':>10}")
    for n_sym, m_sub in ((8, 16), (16, 32), (50, 64)):
        cfg = make_frame_config(5.89e9, 156250.0 * m_sub, m_sub, n_sym, 0.0)
        tau = 0.37 * cfg.symbol_duration
        nu = 0.21 * cfg.subcarrier_spacing
        l_tau = delay_tap_count(tau, cfg)
        args = (n_sym, m_sub, tau, nu, cfg.symbol_duration,
                cfg.subcarrier_spacing, l_tau)

        for label, attr in (("psi_matrix", "psi_matrix"),
                            ("psi_derivative_matrices",
                             "psi_derivative_matrices")):
            t_np, ref = _time(lambda: getattr(kernels_numpy, attr)(*args),
                              repeat)
            if kernels_numba is None:
                print(f"{label:<34}{n_sym}x{m_sub:>8}{t_np:>12.4f}"
                      f"{'n/a':>12}{'n/a':>10}")
                continue
            getattr(kernels_numba, attr)(*args)  # compile outside the timer
            t_nb, got = _time(lambda: getattr(kernels_numba, attr)(*args),
                              repeat)
            if attr == "psi_matrix":
                err = np.max(np.abs(got - ref))
            else:
                err = max(np.max(np.abs(g - r)) / np.max(np.abs(r))
                          for g, r in zip(got, ref))
            assert err < 1e-9, f"backend mismatch in {label}: {err}"
            print(f"{label:<34}{n_sym}x{m_sub:>8}{t_np*1e3:>10.2f}ms"
                  f"{t_nb*1e3:>10.2f}ms{t_np/t_nb:>10.1f}")


def bench_bank(repeat):
    cfg = make_frame_config(5.89e9, 156250.0 * 16, 16, 8, 0.0)
    grid = make_estimation_grid(cfg, 2 * 8, 4 * 16,
                                0.4 * cfg.symbol_duration,
                                0.15 * cfg.subcarrier_spacing, waveform="otfs")
    rng = np.random.default_rng(0)
    x = np.exp(1j * rng.uniform(0, 2 * np.pi, cfg.grid_size))
    t_naive, ref = _time(lambda: matched_bank(cfg, x, grid, method="naive"), 1)
    t_fast, got = _time(lambda: matched_bank(cfg, x, grid, method="fast"),
                        repeat)
    err = np.max(np.abs(got.matched_conj - ref.matched_conj))
    assert err < 1e-9, f"bank mismatch: {err}"
    print(f"\nmatched bank over {grid.n_points} grid points "
          f"(active backend drives the naive path):")
    print(f"  naive  {t_naive*1e3:9.1f} ms")
    print(f"  fast   {t_fast*1e3:9.1f} ms   speedup {t_naive/t_fast:.1f}x")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    if kernels_numba is None:
        print("numba unavailable: timing the numpy fallback only\n")
    bench_matrix_kernels(args.repeat)
    bench_bank(args.repeat)


if __name__ == "__main__":
    main()
