"""Evolution states, field/momentum conversions and initial-data generators."""
from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError, InputShapeError, NumericError
from .spectral import Grid, check_field, helmholtz_apply, helmholtz_solve


@dataclass(frozen=True)
class FieldState:
    """Sampled (eta, u, v) at time t, with eta = rho - 1."""

    t: float
    eta: np.ndarray
    u: np.ndarray
    v: np.ndarray
    grid: Grid

    def __post_init__(self):
        for name in ("eta", "u", "v"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.shape != (self.grid.n_points,):
                raise InputShapeError(f"{name} has shape {arr.shape}, expected ({self.grid.n_points},)")
            if not np.all(np.isfinite(arr)):
                raise NumericError(f"{name} contains non-finite values")
            object.__setattr__(self, name, arr)

    @property
    def rho(self):
        return self.eta + 1.0

    def fields(self):
        return self.eta, self.u, self.v

    def with_fields(self, t, eta, u, v):
        return replace(self, t=t, eta=eta, u=u, v=v)

    def swapped(self):
        """State with u and v exchanged."""
        return replace(self, u=self.v, v=self.u)


@dataclass(frozen=True)
class MomentumState:
    """Sampled (rho, m, n) at time t, with m = u - u_xx and n = v - v_xx."""

    t: float
    rho: np.ndarray
    m: np.ndarray
    n: np.ndarray
    grid: Grid

    def __post_init__(self):
        for name in ("rho", "m", "n"):
            object.__setattr__(self, name, check_field(getattr(self, name), self.grid))


def to_momentum(s):
    g = s.grid
    return MomentumState(t=s.t, rho=s.eta + 1.0, m=helmholtz_apply(s.u, g), n=helmholtz_apply(s.v, g), grid=g)


def from_momentum(ms):
    g = ms.grid
    return FieldState(t=ms.t, eta=ms.rho - 1.0, u=helmholtz_solve(ms.m, g), v=helmholtz_solve(ms.n, g), grid=g)


def zero_state(grid, t=0.0):
    z = np.zeros(grid.n_points)
    return FieldState(t=t, eta=z, u=z.copy(), v=z.copy(), grid=grid)


# -- single-field profiles ---------------------------------------------------

def _positive(params, key, default=None):
    val = params.get(key, default)
    if val is None or not val > 0:
        raise DomainError(f"parameter {key!r} must be positive, got {val!r}")
    return float(val)


def _gaussian(x, p):
    width = _positive(p, "width", 1.0)
    return float(p.get("amp", 1.0)) * np.exp(-(((x - p.get("center", 0.0)) / width) ** 2))


def _smooth_peakon(x, p):
    kappa = _positive(p, "kappa", 0.1)
    r = np.sqrt((x - p.get("center", 0.0)) ** 2 + kappa**2)
    return float(p.get("c", p.get("amp", 1.0))) * np.exp(-r)


def _fourier_mode(x, p, grid):
    k = 2.0 * np.pi * p.get("k", 1) / grid.L
    return float(p.get("amp", 1.0)) * np.cos(k * x + p.get("phase", 0.0))


def _algebraic_decay(x, p):
    power = _positive(p, "power", 2.0)
    scale = _positive(p, "scale", 1.0)
    r = (x - p.get("center", 0.0)) / scale
    return float(p.get("amp", 1.0)) * (1.0 + r**2) ** (-0.5 * power)


def _log_decay(x, p):
    power = _positive(p, "power", 1.0)
    beta = _positive(p, "beta", 1.0)
    r = np.sqrt(1.0 + (x - p.get("center", 0.0)) ** 2)
    return float(p.get("amp", 1.0)) * np.log(np.e + beta + r) ** (-power)


def _constant(x, p):
    return np.full(x.shape, float(p.get("value", 0.0)))


_PROFILES = {
    "gaussian": lambda x, p, g: _gaussian(x, p),
    "smooth_peakon": lambda x, p, g: _smooth_peakon(x, p),
    "fourier_mode": _fourier_mode,
    "algebraic_decay": lambda x, p, g: _algebraic_decay(x, p),
    "log_decay": lambda x, p, g: _log_decay(x, p),
    "constant": lambda x, p, g: _constant(x, p),
}

INITIAL_KINDS = tuple(_PROFILES) + ("blowup_candidate",)


def blowup_profile(grid, v0, slope, x0=0.0, width=1e-4, offset=0.0, v_width=None, eta=0.0):
    """Slope-controlled data for blow-up experiments.

    ``u`` is ``slope * (x - x0) * exp(-((x - x0)/width)^2) + offset`` so that
    ``u_x(x0) = slope`` exactly; ``v`` equals ``v0`` at ``x0`` and is either
    constant or a Gaussian of width ``v_width``.
    """
    if not v0 > 0:
        raise DomainError(f"v0 must be positive, got {v0!r}")
    if not width > 0:
        raise DomainError(f"width must be positive, got {width!r}")
    x = grid.x
    r = x - x0
    u = slope * r * np.exp(-((r / width) ** 2)) + offset
    if v_width is None:
        v = np.full(grid.n_points, float(v0))
    else:
        if not v_width > 0:
            raise DomainError(f"v_width must be positive, got {v_width!r}")
        v = v0 * np.exp(-((r / v_width) ** 2))
    return u, v, np.full(grid.n_points, float(eta))


def make_initial(kind, params, grid):
    """Build an initial FieldState.

    For every kind except ``blowup_candidate``, ``params`` maps each of
    ``"eta"``, ``"u"``, ``"v"`` to a parameter dict for that field's profile;
    missing fields are zero. A field dict may carry its own ``"kind"`` to
    override ``kind`` for that field. ``blowup_candidate`` takes flat keywords
    (``v0``, ``slope``, ``x0``, ``width``, ``offset``, ``v_width``, ``eta``).
    """
    params = dict(params or {})
    if kind == "blowup_candidate":
        u, v, eta = blowup_profile(grid, **params)
        return FieldState(t=0.0, eta=eta, u=u, v=v, grid=grid)
    if kind not in _PROFILES:
        raise DomainError(f"unknown initial kind {kind!r}; expected one of {INITIAL_KINDS}")
    unknown = set(params) - {"eta", "u", "v"}
    if unknown:
        raise DomainError(f"unknown field(s) {sorted(unknown)} in initial parameters")
    out = {}
    for name in ("eta", "u", "v"):
        p = params.get(name)
        if p is None:
            out[name] = np.zeros(grid.n_points)
            continue
        p = dict(p)
        k = p.pop("kind", kind)
        if k not in _PROFILES:
            raise DomainError(f"unknown profile kind {k!r} for field {name!r}")
        out[name] = _PROFILES[k](grid.x, p, grid)
    return FieldState(t=0.0, grid=grid, **out)


def random_smooth_state(grid, rng, band=None, amp=0.5, t=0.0):
    """Random band-limited state with decaying mode amplitudes.

    The default band is an eighth of the grid, so cubic products stay
    alias-free and discrete product rules hold to rounding.
    """
    band = grid.n_points // 8 if band is None else band
    fields = []
    for _ in range(3):
        c = np.zeros(grid.n_points // 2 + 1, dtype=complex)
        j = np.arange(1, band + 1)
        c[1 : band + 1] = (rng.standard_normal(band) + 1j * rng.standard_normal(band)) / j**2
        c[0] = rng.standard_normal()
        f = np.fft.irfft(c, n=grid.n_points)
        fields.append(amp * f / np.max(np.abs(f)))
    return FieldState(t=t, eta=fields[0], u=fields[1], v=fields[2], grid=grid)
