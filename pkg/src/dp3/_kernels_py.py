"""Pure-numpy implementations of the hot kernels.

Every function here has a twin in ``_kernels_cy.pyx`` with the same
signature. The pointwise kernels use the same evaluation order in both
backends and agree bitwise; the reductions agree to rounding.
"""
import numpy as np


def nonlocal_source(a, b, a_x, b_x, a_xx, b_xx, rho2, sign):
    """3 a b a_x + 2 a b_x a_xx + 2 a_x^2 b_x + a b_xx a_x + sign rho2 a."""
    out = 3.0 * a * b * a_x
    out += 2.0 * a * b_x * a_xx
    out += 2.0 * a_x * a_x * b_x
    out += a * b_xx * a_x
    out += sign * rho2 * a
    return out


def flux_source(a, b, a_x, b_xx, rho2, sign):
    """3 b a a_x - a a_x b_xx + sign rho2 a."""
    out = 3.0 * b * a * a_x
    out -= a * a_x * b_xx
    out += sign * rho2 * a
    return out


def trig_eval(re, im, k, xr):
    """Evaluate sum_j re_j cos(k_j x) - im_j sin(k_j x) at each point of xr."""
    xr = np.asarray(xr, dtype=float)
    out = np.empty(xr.shape[0])
    for i in range(xr.shape[0]):
        ph = k * xr[i]
        out[i] = np.sum(re * np.cos(ph) - im * np.sin(ph))
    return out


def omega_profile(w, x, period):
    """w_i * sum_j exp(-d(x_i, x_j)) / w_j * dx with periodic distance d."""
    n = x.shape[0]
    dx = period / n
    inv = 1.0 / w
    out = np.empty(n)
    for i in range(n):
        d = np.abs(x - x[i])
        d = np.minimum(d, period - d)
        out[i] = w[i] * np.sum(np.exp(-d) * inv) * dx
    return out
