"""The offset logarithmic integral li(x) = ∫_2^x dt/log t and its inverse."""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate, special

_EI_LOG2 = float(special.expi(math.log(2.0)))


def li(x: float) -> float:
    """li(x) by adaptive quadrature (absolute tolerance 1e-10)."""
    if x < 2:
        raise ValueError(f"li is defined here for x >= 2, got {x}")
    if x == 2:
        return 0.0
    # substitute t = e^u so the integrand e^u/u is smooth on [log 2, log x]
    val, _ = integrate.quad(lambda u: math.exp(u) / u, math.log(2.0), math.log(x),
                            epsabs=1e-10, epsrel=1e-13, limit=200)
    return val


def li_fast(x):
    """Closed form Ei(log x) - Ei(log 2); vectorised, used in inner loops."""
    return special.expi(np.log(np.asarray(x, dtype=float))) - _EI_LOG2


def li_inverse(y):
    """Solve li(x) = y for y >= 0 by Newton's method started at x = 2.

    li is increasing and concave, so the iterates increase monotonically to the root.
    """
    y = np.asarray(y, dtype=float)
    if np.any(y < 0):
        raise ValueError("li_inverse needs y >= 0")
    x = np.full_like(y, 2.0)
    for _ in range(200):
        step = (y - li_fast(x)) * np.log(x)
        x_new = x + np.maximum(step, 0.0)
        if np.all(np.abs(x_new - x) <= 4e-16 * x_new):
            x = x_new
            break
        x = x_new
    return x
