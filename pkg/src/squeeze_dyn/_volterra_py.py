"""Pure-Python (numpy) fallback for the memory-kernel solver inner loop.

Same scheme as the compiled kernel: product-trapezoidal history integral,
Heun predictor-corrector step. The per-step history sum is a vectorized
dot over the stored past, so the fallback stays usable at 10^4-10^5 nodes.
"""

from __future__ import annotations

import numpy as np


def solve_history(fvals: np.ndarray, h: float, out: np.ndarray) -> None:
    """Fill ``out`` (length M) with kappa at the grid nodes.

    ``fvals[j]`` must hold the kernel sampled at j*h.
    """
    M = fvals.shape[0]
    f0 = fvals[0]
    out[0] = 1.0
    for n in range(M - 1):
        if n == 0:
            g_n = 0.0
        else:
            s = 0.5 * fvals[n] * out[0] + 0.5 * f0 * out[n]
            if n > 1:
                s += np.dot(fvals[n - 1:0:-1], out[1:n])
            g_n = -h * s
        pred = out[n] + h * g_n
        s = 0.5 * fvals[n + 1] * out[0] + 0.5 * f0 * pred
        if n >= 1:
            s += np.dot(fvals[n:0:-1], out[1:n + 1])
        g_p = -h * s
        out[n + 1] = out[n] + 0.5 * h * (g_n + g_p)
