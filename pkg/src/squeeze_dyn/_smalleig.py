"""Closed-form smallest eigenvalues of 2x2 and 3x3 real symmetric matrices."""

from __future__ import annotations

import math

import numpy as np


def min_eig_sym2(a: float, b: float, c: float) -> float:
    """Smaller eigenvalue of [[a, b], [b, c]]."""
    return 0.5 * (a + c) - math.hypot(0.5 * (a - c), b)


def min_eig_sym3(m: np.ndarray) -> float:
    """Smallest eigenvalue of a real symmetric 3x3 matrix, by Cardano's
    trigonometric solution of the characteristic cubic."""
    a00, a01, a02 = float(m[0, 0]), float(m[0, 1]), float(m[0, 2])
    a11, a12, a22 = float(m[1, 1]), float(m[1, 2]), float(m[2, 2])
    off = a01 * a01 + a02 * a02 + a12 * a12
    if off == 0.0:
        return min(a00, a11, a22)
    q = (a00 + a11 + a22) / 3.0
    p2 = (a00 - q) ** 2 + (a11 - q) ** 2 + (a22 - q) ** 2 + 2.0 * off
    p = math.sqrt(p2 / 6.0)
    # det of (m - q*I)/p
    b00, b11, b22 = (a00 - q) / p, (a11 - q) / p, (a22 - q) / p
    b01, b02, b12 = a01 / p, a02 / p, a12 / p
    det = (
        b00 * (b11 * b22 - b12 * b12)
        - b01 * (b01 * b22 - b12 * b02)
        + b02 * (b01 * b12 - b11 * b02)
    )
    r = max(-1.0, min(1.0, det / 2.0))
    phi = math.acos(r) / 3.0
    # eigenvalues are q + 2p*cos(phi + 2*pi*k/3); the smallest uses k=1
    return q + 2.0 * p * math.cos(phi + 2.0 * math.pi / 3.0)
