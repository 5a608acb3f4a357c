"""Periodic Fourier grid and the spectral operators built on it.

All operators act on real fields sampled at ``grid.x`` and go through the
real FFT. The Nyquist coefficient is dropped for odd-order multipliers so
that first derivatives stay real and skew-symmetric.
"""
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import kernels
from .errors import DomainError, InputShapeError, NumericError


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid on ``[-L/2, L/2)``.

    Parameters
    ----------
    L : float
        Domain length.
    n_points : int
        Number of samples, a power of two no smaller than 16.
    """

    L: float
    n_points: int

    def __post_init__(self):
        n = self.n_points
        if not isinstance(n, (int, np.integer)) or n < 16 or n & (n - 1):
            raise DomainError(f"n_points must be a power of two >= 16, got {n!r}")
        if not (np.isfinite(self.L) and self.L > 0):
            raise DomainError(f"domain length must be positive, got {self.L!r}")

    @property
    def dx(self):
        return self.L / self.n_points

    @cached_property
    def x(self):
        return -0.5 * self.L + self.dx * np.arange(self.n_points)

    @cached_property
    def k(self):
        """Non-negative angular wavenumbers of the rfft layout."""
        return 2.0 * np.pi * np.fft.rfftfreq(self.n_points, d=self.dx)

    @cached_property
    def wavenumbers(self):
        """Full symmetric wavenumber array in fft order, Nyquist excluded."""
        kk = 2.0 * np.pi * np.fft.fftfreq(self.n_points, d=self.dx)
        return np.delete(kk, self.n_points // 2)

    @property
    def k_nyquist(self):
        return np.pi / self.dx

    @property
    def k_resolved(self):
        """Largest wavenumber carried by both sine and cosine modes."""
        return self.k[-2]

    @cached_property
    def k_odd(self):
        kk = self.k.copy()
        kk[-1] = 0.0
        return kk

    @cached_property
    def helmholtz_symbol(self):
        return 1.0 / (1.0 + self.k**2)

    @cached_property
    def dealias_mask(self):
        return (self.k <= (2.0 / 3.0) * self.k_nyquist).astype(float)

    @cached_property
    def parseval_weights(self):
        w = np.full(self.k.shape, 2.0)
        w[0] = 1.0
        w[-1] = 1.0
        return w


def check_field(f, grid):
    """Return ``f`` as a float array after shape and finiteness checks."""
    f = np.asarray(f, dtype=float)
    if f.shape != (grid.n_points,):
        raise InputShapeError(f"expected shape ({grid.n_points},), got {f.shape}")
    if not np.all(np.isfinite(f)):
        raise NumericError("input field contains non-finite values")
    return f


def to_spectrum(f, grid):
    return np.fft.rfft(check_field(f, grid))


def from_spectrum(c, grid):
    return np.fft.irfft(c, n=grid.n_points)


def apply_multiplier(f, grid, symbol):
    return from_spectrum(to_spectrum(f, grid) * symbol, grid)


def spectral_derivative(f, grid, order=1):
    """Fourier-collocation derivative of order 1, 2 or 3."""
    if order not in (1, 2, 3):
        raise DomainError(f"derivative order must be 1, 2 or 3, got {order}")
    k = grid.k_odd if order % 2 else grid.k
    return apply_multiplier(f, grid, (1j * k) ** order)


def helmholtz_solve(f, grid):
    """Solve (1 - d^2/dx^2) u = f, i.e. u = p * f with p = exp(-|x|)/2."""
    return apply_multiplier(f, grid, grid.helmholtz_symbol)


def helmholtz_apply(f, grid):
    """(1 - d^2/dx^2) f."""
    return apply_multiplier(f, grid, 1.0 + grid.k**2)


conv_p = helmholtz_solve


def conv_px(f, grid):
    """p_x * f, the derivative of the Helmholtz inverse."""
    return apply_multiplier(f, grid, 1j * grid.k_odd * grid.helmholtz_symbol)


def dealias(f, grid):
    """Zero every mode above two thirds of the Nyquist wavenumber."""
    return apply_multiplier(f, grid, grid.dealias_mask)


def l2_norm(f, grid):
    """L2 norm over one period by the rectangle rule."""
    f = check_field(f, grid)
    return float(np.sqrt(grid.dx * np.dot(f, f)))


def l2_norm_spectral(f, grid):
    """L2 norm from Fourier coefficients, Parseval-normalised to match l2_norm."""
    c = to_spectrum(f, grid)
    return float(np.sqrt(grid.dx / grid.n_points * np.sum(grid.parseval_weights * np.abs(c) ** 2)))


def interpolate(f, grid, xq):
    """Evaluate the trigonometric interpolant of ``f`` at arbitrary points."""
    c = to_spectrum(f, grid) / grid.n_points
    c[1:-1] *= 2.0
    re = np.ascontiguousarray(c.real)
    im = np.ascontiguousarray(c.imag)
    im[-1] = 0.0
    xq = np.atleast_1d(np.asarray(xq, dtype=float))
    if not np.all(np.isfinite(xq)):
        raise NumericError("interpolation point is not finite")
    return kernels.trig_eval(re, im, grid.k, xq + 0.5 * grid.L)


def smooth_step(t):
    """C-infinity step: 0 for t <= 0, 1 for t >= 1, built from exp(-1/t)."""
    t = np.asarray(t, dtype=float)
    a = np.where(t > 0, np.exp(-1.0 / np.where(t > 0, t, 1.0)), 0.0)
    s = 1.0 - t
    b = np.where(s > 0, np.exp(-1.0 / np.where(s > 0, s, 1.0)), 0.0)
    return a / (a + b)


def _low_pass(r):
    # 1 on |xi| <= 3/4, 0 on |xi| >= 4/3
    return 1.0 - smooth_step((r - 0.75) / (4.0 / 3.0 - 0.75))


@dataclass(frozen=True)
class LPPartition:
    """Dyadic Littlewood-Paley symbols sampled on the grid wavenumbers.

    ``chi`` is supported in ``|xi| <= 4/3 * scale`` and ``phi[j]`` in
    ``2^j * [3/4, 8/3] * scale``. The annulus symbol is the difference
    ``theta(xi/2) - theta(xi)`` of the low-pass profile, so the partial sums
    telescope and the partition of unity holds to rounding.
    """

    grid: Grid
    chi: np.ndarray
    phi: tuple
    j_max: int
    scale: float = 1.0

    @classmethod
    def build(cls, grid, scale=1.0):
        xi = grid.k / scale
        k_top = grid.k_nyquist / scale
        j_max = 0
        while 0.75 * 2.0 ** (j_max + 1) <= k_top:
            j_max += 1
        chi = _low_pass(xi)
        phi = tuple(_low_pass(xi / 2.0 ** (j + 1)) - _low_pass(xi / 2.0**j) for j in range(j_max + 1))
        return cls(grid=grid, chi=chi, phi=phi, j_max=j_max, scale=scale)

    def symbol(self, j):
        if j == -1:
            return self.chi
        return self.phi[j]

    def residual(self):
        """Max deviation of chi + sum_j phi_j from 1 over the rfft band."""
        total = self.chi + np.sum(self.phi, axis=0)
        return float(np.max(np.abs(total - 1.0)))


def lp_block(j, f, partition):
    """Dyadic block Delta_j f; blocks with j <= -2 vanish."""
    if j > partition.j_max:
        raise DomainError(f"block index {j} exceeds j_max={partition.j_max}")
    if j <= -2:
        return np.zeros(partition.grid.n_points)
    return apply_multiplier(f, partition.grid, partition.symbol(j))


def mollifier_symbol(xi):
    """Friedrichs symbol: 1 on |xi| <= 1, smooth monotone decay, 0 for |xi| >= 2."""
    return 1.0 - smooth_step(np.abs(np.asarray(xi, dtype=float)) - 1.0)


@dataclass(frozen=True)
class MollifierSpec:
    eps: float
    symbol: np.ndarray

    @classmethod
    def build(cls, eps, grid):
        if not eps > 0:
            raise DomainError(f"mollification scale must be positive, got {eps!r}")
        return cls(eps=float(eps), symbol=mollifier_symbol(eps * grid.k))


def mollify(f, spec, grid):
    """J_eps f as a Fourier multiplier."""
    if not spec.eps > 0:
        raise DomainError(f"mollification scale must be positive, got {spec.eps!r}")
    return apply_multiplier(f, grid, spec.symbol)
