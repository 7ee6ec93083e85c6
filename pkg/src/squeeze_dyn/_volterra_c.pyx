# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loop of the memory-kernel solver.

Integrates kappa'(t) = -int_0^t f(t-s) kappa(s) ds with kappa(0) = 1 on a
uniform grid: product-trapezoidal quadrature for the history integral and
a second-order Heun predictor-corrector time step. O(M^2) in the node
count; kernel values are pre-sampled so the loop is pure arithmetic.
"""


def solve_history(double[::1] fvals, double h, double[::1] out):
    """Fill ``out`` (length M) with kappa at the grid nodes.

    ``fvals[j]`` must hold the kernel sampled at j*h.
    """
    cdef Py_ssize_t M = fvals.shape[0]
    cdef Py_ssize_t n, j
    cdef double f0 = fvals[0]
    cdef double s, g_n, g_p, pred

    out[0] = 1.0
    for n in range(M - 1):
        if n == 0:
            g_n = 0.0
        else:
            s = 0.5 * fvals[n] * out[0] + 0.5 * f0 * out[n]
            for j in range(1, n):
                s += fvals[n - j] * out[j]
            g_n = -h * s
        pred = out[n] + h * g_n
        s = 0.5 * fvals[n + 1] * out[0] + 0.5 * f0 * pred
        for j in range(1, n + 1):
            s += fvals[n + 1 - j] * out[j]
        g_p = -h * s
        out[n + 1] = out[n] + 0.5 * h * (g_n + g_p)
