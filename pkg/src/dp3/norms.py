"""Norm suite and the capped decay weights."""
import math
import warnings
from dataclasses import asdict, dataclass

import numpy as np

from . import kernels
from .errors import DecayWarning, DomainError
from .spectral import LPPartition, check_field, lp_block, spectral_derivative, to_spectrum

DECAY_TOL = 1e-10


@dataclass(frozen=True)
class WeightProfile:
    """Capped weight, logarithmic ``(ln(e+beta+|x|))^beta`` or algebraic
    ``(1+beta+|x|)^beta``, frozen at its value for ``|x| >= N``."""

    kind: str
    beta: float
    N: float

    def __post_init__(self):
        if self.kind not in ("log", "algebraic"):
            raise DomainError(f"weight kind must be 'log' or 'algebraic', got {self.kind!r}")
        if not self.beta > 0:
            raise DomainError(f"beta must be positive, got {self.beta!r}")
        if not self.N > 0:
            raise DomainError(f"cap N must be positive, got {self.N!r}")

    @property
    def contraction(self):
        """gamma for the log weight, lambda for the algebraic one; |w'| <= c w."""
        b = self.beta
        if self.kind == "log":
            return b / ((math.e + b) * math.log(math.e + b))
        return b / (1.0 + b)

    @property
    def label(self):
        return f"{self.kind}_b{self.beta:g}_N{self.N:g}"


def weight_eval(profile, x):
    r = np.minimum(np.abs(np.asarray(x, dtype=float)), profile.N)
    b = profile.beta
    if profile.kind == "log":
        return np.log(math.e + b + r) ** b
    return (1.0 + b + r) ** b


def omega_profile(profile, grid):
    """w(x) * int exp(-|x-y|) / w(y) dy on the periodic grid, trapezoid rule."""
    if profile.N >= 0.5 * grid.L:
        raise DomainError(f"cap N={profile.N} must be below half the domain length {0.5 * grid.L}")
    w = np.ascontiguousarray(weight_eval(profile, grid.x))
    return kernels.omega_profile(w, np.ascontiguousarray(grid.x), float(grid.L))


def omega_bound(profile, grid):
    return float(np.max(omega_profile(profile, grid)))


def weighted_sup(fields, profile, grid):
    """max over fields and grid points of |f(x)| w(x)."""
    w = weight_eval(profile, grid.x)
    best = 0.0
    for f in fields:
        best = max(best, float(np.max(np.abs(check_field(f, grid)) * w)))
    return best


# -- norms -------------------------------------------------------------------

def edge_magnitude(f, grid):
    """max |f| over the two outermost samples of the box."""
    f = np.asarray(f)
    return float(max(abs(f[0]), abs(f[-1]), abs(f[1]), abs(f[-2])))


def check_decay(f, grid, name="field"):
    """Warn when line integrals over one period are not trustworthy for f."""
    mag = edge_magnitude(f, grid)
    if mag > DECAY_TOL:
        warnings.warn(f"{name} is {mag:.3e} at the box edge; period integrals only approximate line integrals",
                      DecayWarning, stacklevel=3)
        return False
    return True


def lp_norm(f, grid, p):
    f = check_field(f, grid)
    if p == np.inf:
        return float(np.max(np.abs(f)))
    return float((grid.dx * np.sum(np.abs(f) ** p)) ** (1.0 / p))


def w11_norm(f, grid):
    return lp_norm(f, grid, 1) + lp_norm(spectral_derivative(f, grid, 1), grid, 1)


def w1inf_norm(f, grid):
    """||f||_inf + ||f_x||_inf (sum convention)."""
    return lp_norm(f, grid, np.inf) + lp_norm(spectral_derivative(f, grid, 1), grid, np.inf)


def sobolev_norm(f, grid, s):
    c = to_spectrum(f, grid)
    weights = grid.parseval_weights * (1.0 + grid.k**2) ** s
    return float(np.sqrt(grid.dx / grid.n_points * np.sum(weights * np.abs(c) ** 2)))


def besov_norm(f, grid, partition=None):
    """B^2_{2,1}: sum over j >= -1 of 4^j ||Delta_j f||_2."""
    partition = partition or LPPartition.build(grid)
    total = 0.0
    for j in range(-1, partition.j_max + 1):
        blk = lp_block(j, f, partition)
        total += 4.0**j * math.sqrt(grid.dx * np.dot(blk, blk))
    return total


@dataclass(frozen=True)
class NormReport:
    L1: float
    L2: float
    Linf: float
    W11: float
    W1inf: float
    Hs: float
    B2_21: float

    def as_dict(self):
        return asdict(self)


NORM_NAMES = ("L1", "L2", "Linf", "W11", "W1inf", "Hs", "B2_21")


def field_norms(f, grid, sobolev_s=2.0, partition=None):
    f = check_field(f, grid)
    fx = spectral_derivative(f, grid, 1)
    l1 = lp_norm(f, grid, 1)
    linf = lp_norm(f, grid, np.inf)
    return NormReport(
        L1=l1,
        L2=lp_norm(f, grid, 2),
        Linf=linf,
        W11=l1 + lp_norm(fx, grid, 1),
        W1inf=linf + lp_norm(fx, grid, np.inf),
        Hs=sobolev_norm(f, grid, sobolev_s),
        B2_21=besov_norm(f, grid, partition),
    )


def norm_suite(s, sobolev_s=2.0, partition=None):
    """NormReport for each of eta, u, v of a FieldState."""
    partition = partition or LPPartition.build(s.grid)
    return {name: field_norms(f, s.grid, sobolev_s, partition) for name, f in zip(("eta", "u", "v"), s.fields())}
