"""Friedrichs-mollified system: epsilon ladders and the size estimate."""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from . import kernels
from .errors import DP3Error, DomainError
from .evolution import run
from .norms import sobolev_norm
from .rhs import _derivs, _finite, _spec
from .spectral import MollifierSpec, from_spectrum


def rhs_mollified(s, spec):
    """(eta_t, u_t, v_t) of the mollified system.

    Transport terms carry J_eps on every factor and outside the product; the
    nonlocal parts use the unmollified fields exactly as in the convolution form.
    """
    g = s.grid
    J = spec.symbol
    mask = g.dealias_mask
    eta, u, v = s.eta, s.u, s.v
    ux, uxx = _derivs(u, g)
    vx, vxx = _derivs(v, g)

    def mol(f):
        return from_spectrum(J * np.fft.rfft(f), g)

    Jeta, Ju, Jv, Jux, Jvx = (mol(f) for f in (eta, u, v, ux, vx))
    dens = _spec((1.0 + Jeta) * Ju * Jv, "mollified density flux")
    eta_t = from_spectrum(-1j * g.k_odd * J * mask * dens, g)

    rho2 = _finite((eta + 1.0) ** 2, "(eta+1)^2")
    h = g.helmholtz_symbol
    src_u = _spec(kernels.nonlocal_source(u, v, ux, vx, uxx, vxx, rho2, 1.0), "nonlocal source")
    src_v = _spec(kernels.nonlocal_source(v, u, vx, ux, vxx, uxx, rho2, -1.0), "nonlocal source")
    tr_u = _spec(Ju * Jv * Jux, "mollified transport")
    tr_v = _spec(Jv * Ju * Jvx, "mollified transport")
    u_t = from_spectrum(-mask * (J * tr_u + h * src_u), g)
    v_t = from_spectrum(-mask * (J * tr_v + h * src_v), g)
    return eta_t, u_t, v_t


def _stack(s):
    return np.concatenate(s.fields())


def trajectory_distance(snaps_a, snaps_b):
    """sup over common samples of ||A - B||_2 / ||B||_2 for the stacked triple."""
    best = 0.0
    for a, b in zip(snaps_a, snaps_b):
        if abs(a.t - b.t) > 1e-12 * max(1.0, abs(a.t)):
            raise DomainError(f"sample times differ: {a.t} vs {b.t}")
        xa, xb = _stack(a), _stack(b)
        den = np.linalg.norm(xb)
        num = np.linalg.norm(xa - xb)
        best = max(best, num / den if den > 0 else num)
    return float(best)


@dataclass
class LadderTable:
    epsilons: list
    run_ok: list
    distances: list
    ratios: list
    failures: dict = field(default_factory=dict)

    @property
    def monotone(self):
        d = self.distances
        return all(a is not None and b is not None and b <= a for a, b in zip(d[:-1], d[1:]))

    def as_dict(self):
        out = asdict(self)
        out["monotone"] = self.monotone
        return out


def _mollified_run(initial, eps, control, sample_every):
    spec = MollifierSpec.build(eps, initial.grid)
    return run(initial, control, sample_every=sample_every, rhs=lambda st: rhs_mollified(st, spec),
               fixed_dt=True)


def epsilon_ladder(initial, epsilons, control, sample_every=1, workers=1):
    """Cauchy differences between consecutive members of a decreasing ladder.

    Every member uses the fixed step ``control.dt_max`` so all runs share
    one sampling grid over the common window [0, t_end].
    """
    eps = [float(e) for e in epsilons]
    if len(eps) < 3:
        raise DomainError(f"epsilon ladder needs at least three entries, got {len(eps)}")
    if any(e <= 0 for e in eps) or any(b >= a for a, b in zip(eps[:-1], eps[1:])):
        raise DomainError("epsilon ladder must be positive and strictly decreasing")

    def job(e):
        try:
            res = _mollified_run(initial, e, control, sample_every)
        except DP3Error as exc:
            return None, str(exc)
        if res.report.detected:
            return None, f"run stopped early: {res.report.reason}"
        return res, None

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(job, eps))
    else:
        results = [job(e) for e in eps]

    failures = {str(e): msg for e, (_, msg) in zip(eps, results) if msg}
    dist = []
    for (ra, _), (rb, _) in zip(results[:-1], results[1:]):
        dist.append(None if ra is None or rb is None else trajectory_distance(ra.snapshots, rb.snapshots))
    ratios = []
    for a, b in zip(dist[:-1], dist[1:]):
        if a is None or b is None:
            ratios.append(None)
        else:
            ratios.append(b / a if a > 0 else 0.0)
    return LadderTable(epsilons=eps, run_ok=[r is not None for r, _ in results], distances=dist,
                       ratios=ratios, failures=failures)


def triple_sobolev_norm(s, sobolev_s):
    return math.sqrt(sum(sobolev_norm(f, s.grid, sobolev_s) ** 2 for f in s.fields()))


def size_estimate_check(initial, control, calibration=1.0, sobolev_s=2.0, form="convolution", sample_every=1):
    """Largest H^s growth ratio over the calibrated window 1/(4 C ||U0||^2).

    ``calibration`` stands in for the unspecified product-estimate constant;
    it is reported, never inferred.
    """
    if not calibration > 0:
        raise DomainError(f"calibration constant must be positive, got {calibration!r}")
    n0 = triple_sobolev_norm(initial, sobolev_s)
    t_cal = math.inf if n0 == 0 else 1.0 / (4.0 * calibration * n0**2)
    window = min(t_cal, control.t_end)
    res = run(initial, replace(control, t_end=window), form=form, sample_every=sample_every)
    ratios = [triple_sobolev_norm(s, sobolev_s) / n0 if n0 > 0 else 0.0 for s in res.snapshots]
    max_ratio = float(max(ratios))
    return {
        "calibration": calibration,
        "sobolev_s": sobolev_s,
        "initial_norm": n0,
        "T_cal": t_cal,
        "window": window,
        "max_ratio": max_ratio,
        "ok": bool(max_ratio <= math.sqrt(2.0)),
        "stopped_early": res.report.detected,
    }
