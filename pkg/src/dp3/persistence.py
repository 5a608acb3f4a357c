"""Weighted sup-norm tracking and far-field decay classification.

Density enters every weighted quantity through rho - 1 = eta, i.e. relative
to the background value 1.
"""
import math

import numpy as np

from .errors import DomainError
from .norms import weighted_sup
from .spectral import interpolate, spectral_derivative

SELECTABLE = ("rho", "rho_x", "u", "u_x", "u_xx", "v", "v_x", "v_xx")
DEFAULT_SELECTOR = ("rho", "u", "u_x", "u_xx", "v", "v_x", "v_xx")


def selected_fields(s, selector=DEFAULT_SELECTOR):
    g = s.grid
    base = {"rho": s.eta, "u": s.u, "v": s.v}
    out = {}
    for name in selector:
        if name not in SELECTABLE:
            raise DomainError(f"unknown field {name!r}; expected a subset of {SELECTABLE}")
        root, _, d = name.partition("_")
        out[name] = base[root] if not d else spectral_derivative(base[root], g, len(d))
    return out


def persistence_track(snapshots, profiles, selector=DEFAULT_SELECTOR):
    """Weighted sups over time for each profile.

    Returns ``{"t": [...], label: {"sup": [...], "per_field": {name: [...]}, "kappa": k}}``
    where ``sup`` is the max over the selected fields and ``kappa`` the
    smallest rate with sup(t) <= exp(kappa t) sup(0) on the samples.
    """
    if not snapshots:
        raise DomainError("persistence tracking needs at least one snapshot")
    if not profiles:
        raise DomainError("persistence tracking needs at least one weight profile")
    out = {"t": [float(s.t) for s in snapshots]}
    per_state = [selected_fields(s, selector) for s in snapshots]
    for p in profiles:
        g = snapshots[0].grid
        per_field = {name: [weighted_sup([fs[name]], p, g) for fs in per_state] for name in selector}
        sup = [max(per_field[name][i] for name in selector) for i in range(len(snapshots))]
        out[p.label] = {"sup": sup, "per_field": per_field, "kappa": growth_rate(out["t"], sup)}
    return out


def growth_rate(t, values):
    t = np.asarray(t, dtype=float)
    v = np.asarray(values, dtype=float)
    if v[0] <= 0:
        return 0.0 if np.all(v <= 0) else math.inf
    mask = t > t[0]
    if not np.any(mask):
        return 0.0
    rates = np.log(np.maximum(v[mask], 1e-300) / v[0]) / (t[mask] - t[0])
    return float(max(0.0, np.max(rates)))


def _log_weight(x, beta, power):
    return np.log(math.e + beta + np.abs(x)) ** power


def _check_ladder(snapshots, beta, gamma, N_ladder):
    if not snapshots:
        raise DomainError("decay classification needs snapshots")
    if not (beta / 3.0 < gamma < beta):
        raise DomainError(f"gamma must lie in (beta/3, beta) = ({beta / 3.0}, {beta}), got {gamma}")
    N = [float(n) for n in N_ladder]
    if len(N) < 2 or any(b <= a for a, b in zip(N[:-1], N[1:])) or N[0] <= 0:
        raise DomainError("N ladder must hold at least two positive, increasing values")
    L = snapshots[0].grid.L
    if N[-1] > 0.35 * L:
        raise DomainError(f"N ladder reaches {N[-1]}, beyond the periodization-safe limit {0.35 * L}")
    return N


def rho_decay_classify(snapshots, beta, gamma, N_ladder, o_drop=0.5, O_factor=2.0, zero_floor=1e-13):
    """Classify the far-field decay of rho - 1 against (ln(e+beta+|x|))^-beta.

    s(N) = sup_t sup_{|x| >= N} |rho - 1| (ln(e+beta+|x|))^beta, with values
    of |rho - 1| below ``zero_floor`` counted as zero. The result is
    ``little_o`` when s drops by at least ``o_drop`` across the ladder,
    ``big_O`` when it stays within ``O_factor`` of s(N_min), else ``unbounded``.
    """
    N = _check_ladder(snapshots, beta, gamma, N_ladder)
    g = snapshots[0].grid
    w = _log_weight(g.x, beta, beta)
    s_vals = []
    for n in N:
        far = np.abs(g.x) >= n
        best = 0.0
        for s in snapshots:
            r = np.abs(s.eta[far])
            r = np.where(r < zero_floor, 0.0, r)
            best = max(best, float(np.max(r * w[far])) if r.size else 0.0)
        s_vals.append(best)
    s_min, s_max = s_vals[0], s_vals[-1]
    if s_max == 0.0 or s_max <= (1.0 - o_drop) * s_min:
        label = "little_o"
    elif s_max <= O_factor * s_min:
        label = "big_O"
    else:
        label = "unbounded"
    return label, {"N": N, "s": s_vals}


def flux_decay_audit(snapshots, beta, gamma, x_samples):
    """Time-integrated density fluxes against the (ln(e+beta+|x|))^(-3 gamma) envelope.

    For each sample |x| reports the two integrals int rho_x uv ds and
    int rho (u_x v + u v_x) ds at the final time (max over +x and -x), the
    envelope constants |I| (ln(e+beta+|x|))^(3 gamma), and the velocity
    envelope sup_t max(|u|, |v|) (ln(e+beta+|x|))^gamma.
    """
    if not (beta / 3.0 < gamma < beta):
        raise DomainError(f"gamma must lie in (beta/3, beta) = ({beta / 3.0}, {beta}), got {gamma}")
    if len(snapshots) < 2:
        raise DomainError("flux audit needs at least two snapshots")
    g = snapshots[0].grid
    xs = np.array([float(x) for x in x_samples])
    if np.any(np.abs(xs) > 0.35 * g.L):
        raise DomainError("sample points must lie inside the periodization-safe region")
    pts = np.concatenate([xs, -xs])
    t = np.array([s.t for s in snapshots])
    flux_a, flux_b, vel = [], [], []
    for s in snapshots:
        rho = s.eta + 1.0
        rx = spectral_derivative(s.eta, g, 1)
        ux = spectral_derivative(s.u, g, 1)
        vx = spectral_derivative(s.v, g, 1)
        flux_a.append(interpolate(rx * s.u * s.v, g, pts))
        flux_b.append(interpolate(rho * (ux * s.v + s.u * vx), g, pts))
        vel.append(np.maximum(np.abs(interpolate(s.u, g, pts)), np.abs(interpolate(s.v, g, pts))))
    int_a = np.abs(np.trapezoid(np.array(flux_a), t, axis=0))
    int_b = np.abs(np.trapezoid(np.array(flux_b), t, axis=0))
    vel_sup = np.max(np.array(vel), axis=0)
    m = xs.size
    ia = np.maximum(int_a[:m], int_a[m:])
    ib = np.maximum(int_b[:m], int_b[m:])
    vs = np.maximum(vel_sup[:m], vel_sup[m:])
    env3 = _log_weight(xs, beta, 3.0 * gamma)
    env1 = _log_weight(xs, beta, gamma)
    return {
        "x": xs.tolist(),
        "rho_x_uv": ia.tolist(),
        "rho_div_uv": ib.tolist(),
        "envelope_rho_x_uv": (ia * env3).tolist(),
        "envelope_rho_div_uv": (ib * env3).tolist(),
        "velocity_envelope": (vs * env1).tolist(),
        "envelope_variation": max(_variation(ia * env3), _variation(ib * env3)),
        "beta": beta,
        "gamma": gamma,
    }


def _variation(c):
    """Largest ratio between neighbouring envelope constants (1 when all zero)."""
    worst = 1.0
    for a, b in zip(c[:-1], c[1:]):
        lo, hi = sorted((abs(a), abs(b)))
        if hi > 0:
            worst = max(worst, math.inf if lo == 0 else hi / lo)
    return float(worst)
