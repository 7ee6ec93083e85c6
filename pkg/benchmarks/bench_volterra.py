#!/usr/bin/env python3
"""Benchmark the memory-kernel solver backends: compiled extension vs the
pure-Python (numpy) fallback, on the standard strong- and weak-coupling
grids. Also reports the cross-backend agreement and the sup-norm error
against the closed form."""

import time

import numpy as np

from squeeze_dyn import (
    MemoryKernel,
    ReservoirConfig,
    TimeGrid,
    kappa_lorentzian,
)
from squeeze_dyn import _volterra_py

try:
    from squeeze_dyn import _volterra_c
except ImportError:
    _volterra_c = None

CASES = [
    ("strong coupling", ReservoirConfig(gamma=0.01, eta0=10.0), TimeGrid(0.0, 100.0, 0.005)),
    ("weak coupling", ReservoirConfig(gamma=0.01, eta0=0.001), TimeGrid(0.0, 2000.0, 0.05)),
]


def run(solver, fvals, h):
    out = np.empty_like(fvals)
    t0 = time.perf_counter()
    solver(fvals, h, out)
    return out, time.perf_counter() - t0


def main():
    print(f"{'case':<16} {'nodes':>7} {'python':>10} {'compiled':>10} {'speedup':>8} "
          f"{'sup err':>10} {'backend diff':>12}")
    for label, res, grid in CASES:
        ts = grid.nodes()
        fvals = MemoryKernel.exponential(res)(ts)
        exact = kappa_lorentzian(res, ts)

        out_py, t_py = run(_volterra_py.solve_history, fvals, grid.step)
        if _volterra_c is not None:
            out_c, t_c = run(_volterra_c.solve_history, fvals, grid.step)
            diff = float(np.max(np.abs(out_c - out_py)))
            err = float(np.max(np.abs(out_c - exact)))
            print(f"{label:<16} {len(ts):>7} {t_py:>9.3f}s {t_c:>9.3f}s "
                  f"{t_py / t_c:>7.1f}x {err:>10.2e} {diff:>12.2e}")
        else:
            err = float(np.max(np.abs(out_py - exact)))
            print(f"{label:<16} {len(ts):>7} {t_py:>9.3f}s {'n/a':>10} {'':>8} "
                  f"{err:>10.2e} {'n/a':>12}")


if __name__ == "__main__":
    main()
