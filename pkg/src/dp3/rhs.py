"""Right-hand sides of the three-component DP system in three equivalent forms.

convolution
    u_t = -uvu_x - p*(3uvu_x + 2uv_xu_xx + 2u_x^2v_x + uv_xxu_x + rho^2 u)
flux
    u_t = -uvu_x - p*(3vuu_x - uu_xv_xx + rho^2 u) - 2 p_x*(uv_xu_x)
momentum
    m_t = -uvm_x - 3vu_xm - rho^2 u,  n_t = -uvn_x - 3v_xun + rho^2 v

with the v-equations obtained by exchanging u and v and flipping the sign of
the rho^2 term, and rho_t = -(rho uv)_x throughout. Every product is
dealiased with the 2/3 rule before any convolution multiplier is applied.
"""
import numpy as np

from . import kernels
from .errors import ConsistencyError, DomainError, NumericError
from .spectral import from_spectrum, spectral_derivative
from .state import to_momentum

FORMS = ("convolution", "flux", "momentum")


def check_form(form):
    if form not in FORMS:
        raise DomainError(f"unknown rhs form {form!r}; expected one of {FORMS}")
    return form


def _finite(arr, name):
    if not np.all(np.isfinite(arr)):
        raise NumericError(f"non-finite value in term {name}")
    return arr


def _spec(f, name):
    return np.fft.rfft(_finite(f, name))


def _derivs(f, grid):
    c = np.fft.rfft(f)
    fx = from_spectrum(1j * grid.k_odd * c, grid)
    fxx = from_spectrum(-(grid.k**2) * c, grid)
    return fx, fxx


def _density_rate(s, uv):
    g = s.grid
    c = _spec(s.eta * uv + uv, "(eta+1)uv")
    return from_spectrum(-1j * g.k_odd * g.dealias_mask * c, g)


def _velocity_convolution(a, b, a_x, b_x, a_xx, b_xx, rho2, sign, grid):
    trans = _spec(a * b * a_x, "transport")
    src = _spec(kernels.nonlocal_source(a, b, a_x, b_x, a_xx, b_xx, rho2, sign), "nonlocal source")
    return from_spectrum(-grid.dealias_mask * (trans + grid.helmholtz_symbol * src), grid)


def _velocity_flux(a, b, a_x, b_x, b_xx, rho2, sign, grid):
    trans = _spec(a * b * a_x, "transport")
    src = _spec(kernels.flux_source(a, b, a_x, b_xx, rho2, sign), "flux source")
    pair = _spec(a * b_x * a_x, "flux pair")
    h = grid.helmholtz_symbol
    return from_spectrum(-grid.dealias_mask * (trans + h * src + 2j * grid.k_odd * h * pair), grid)


def rhs_convolution(s):
    """(eta_t, u_t, v_t) from the Green-function form of the system."""
    g = s.grid
    u, v = s.u, s.v
    ux, uxx = _derivs(u, g)
    vx, vxx = _derivs(v, g)
    uv = u * v
    rho2 = _finite((s.eta + 1.0) ** 2, "(eta+1)^2")
    eta_t = _density_rate(s, uv)
    u_t = _velocity_convolution(u, v, ux, vx, uxx, vxx, rho2, 1.0, g)
    v_t = _velocity_convolution(v, u, vx, ux, vxx, uxx, rho2, -1.0, g)
    return eta_t, u_t, v_t


def rhs_flux(s):
    """(eta_t, u_t, v_t) with the u_xx-free flux rewriting of the nonlocal terms."""
    g = s.grid
    u, v = s.u, s.v
    ux, uxx = _derivs(u, g)
    vx, vxx = _derivs(v, g)
    uv = u * v
    rho2 = _finite((s.eta + 1.0) ** 2, "(eta+1)^2")
    eta_t = _density_rate(s, uv)
    u_t = _velocity_flux(u, v, ux, vx, vxx, rho2, 1.0, g)
    v_t = _velocity_flux(v, u, vx, ux, uxx, rho2, -1.0, g)
    return eta_t, u_t, v_t


def rhs_momentum(ms, s, tol=1e-8):
    """(rho_t, m_t, n_t) from the momentum form; ``ms`` must match ``s``."""
    g = s.grid
    ref = to_momentum(s)
    for name in ("rho", "m", "n"):
        a, b = getattr(ms, name), getattr(ref, name)
        scale = max(1.0, float(np.max(np.abs(b))))
        if np.max(np.abs(a - b)) > tol * scale:
            raise ConsistencyError(f"momentum variable {name} does not match the field state")
    u, v = s.u, s.v
    rho = ms.rho
    ux = spectral_derivative(u, g, 1)
    vx = spectral_derivative(v, g, 1)
    mx = spectral_derivative(ms.m, g, 1)
    nx = spectral_derivative(ms.n, g, 1)
    uv = u * v
    rho2 = _finite(rho * rho, "rho^2")
    mask = g.dealias_mask
    rho_t = from_spectrum(-1j * g.k_odd * mask * _spec(rho * uv, "rho uv"), g)
    m_src = uv * mx + 3.0 * v * ux * ms.m + rho2 * u
    n_src = uv * nx + 3.0 * vx * u * ms.n - rho2 * v
    m_t = from_spectrum(-mask * _spec(m_src, "m source"), g)
    n_t = from_spectrum(-mask * _spec(n_src, "n source"), g)
    return rho_t, m_t, n_t


def field_rhs(s, form="convolution"):
    """(eta_t, u_t, v_t) for any of the three forms."""
    if form == "convolution":
        return rhs_convolution(s)
    if form == "flux":
        return rhs_flux(s)
    if form == "momentum":
        rho_t, m_t, n_t = rhs_momentum(to_momentum(s), s)
        h = s.grid.helmholtz_symbol
        return rho_t, from_spectrum(h * np.fft.rfft(m_t), s.grid), from_spectrum(h * np.fft.rfft(n_t), s.grid)
    raise DomainError(f"unknown rhs form {form!r}; expected one of {FORMS}")


REDUCTIONS = ("dp", "novikov", "swap")


def reduction_residual(s, kind, form="convolution"):
    """Distance of a state from a reduced subsystem.

    dp       max |v - 1|
    novikov  max |u - v|
    swap     with eta = -1, max deviation between the (u_t, v_t) of (u, v)
             and the exchanged (v_t, u_t) of (v, u)
    """
    if kind == "dp":
        return float(np.max(np.abs(s.v - 1.0)))
    if kind == "novikov":
        return float(np.max(np.abs(s.u - s.v)))
    if kind == "swap":
        flat = s.with_fields(s.t, np.full_like(s.eta, -1.0), s.u, s.v)
        _, ut, vt = field_rhs(flat, form)
        _, ut_sw, vt_sw = field_rhs(flat.swapped(), form)
        return float(max(np.max(np.abs(ut - vt_sw)), np.max(np.abs(vt - ut_sw))))
    raise DomainError(f"unknown reduction {kind!r}; expected one of {REDUCTIONS}")
