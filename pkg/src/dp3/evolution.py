"""Time integration, blow-up detection and the blow-up criterion monitor."""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import DomainError, NumericError
from .norms import NORM_NAMES, norm_suite, w1inf_norm, weighted_sup
from .rhs import check_form, field_rhs, reduction_residual
from .spectral import LPPartition, spectral_derivative


@dataclass(frozen=True)
class StepControl:
    dt_max: float
    t_end: float
    cfl: float = 0.3
    dt_min: float = 1e-9
    slope_threshold: float = 1e6

    def __post_init__(self):
        if not (0 < self.dt_min < self.dt_max):
            raise DomainError(f"need 0 < dt_min < dt_max, got dt_min={self.dt_min}, dt_max={self.dt_max}")
        if not (0 < self.cfl <= 1):
            raise DomainError(f"cfl must lie in (0, 1], got {self.cfl}")
        if not self.slope_threshold > 0:
            raise DomainError(f"slope_threshold must be positive, got {self.slope_threshold}")
        if not self.t_end >= 0:
            raise DomainError(f"t_end must be non-negative, got {self.t_end}")


def rk4_step(s, dt, form="convolution", rhs=None):
    """One classical RK4 step. ``rhs`` overrides the form with any callable
    mapping a FieldState to (eta_t, u_t, v_t)."""
    if not dt > 0:
        raise DomainError(f"dt must be positive, got {dt}")
    f = rhs or (lambda st: field_rhs(st, form))
    y0 = s.fields()

    def stage(i, ys, t):
        try:
            return f(s.with_fields(t, *ys))
        except NumericError as exc:
            raise NumericError(f"stage {i}: {exc}") from exc

    def shift(h, k):
        out = tuple(a + h * b for a, b in zip(y0, k))
        for arr in out:
            if not np.all(np.isfinite(arr)):
                raise NumericError("non-finite stage state")
        return out

    k1 = stage(1, y0, s.t)
    k2 = stage(2, shift(0.5 * dt, k1), s.t + 0.5 * dt)
    k3 = stage(3, shift(0.5 * dt, k2), s.t + 0.5 * dt)
    k4 = stage(4, shift(dt, k3), s.t + dt)
    y1 = tuple(a + dt / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4) for a, b1, b2, b3, b4 in zip(y0, k1, k2, k3, k4))
    for arr in y1:
        if not np.all(np.isfinite(arr)):
            raise NumericError("stage 4: non-finite updated state")
    return s.with_fields(s.t + dt, *y1)


def adaptive_dt(s, control):
    """Advective CFL step cfl*dx/max|uv|, capped at dt_max."""
    speed = max(1e-12, float(np.max(np.abs(s.u * s.v))))
    return min(control.dt_max, control.cfl * s.grid.dx / speed)


def criterion_value(s):
    """||u||_{W1,inf} ||v||_{W1,inf} + ||eta + 1||_inf^2."""
    g = s.grid
    return float(w1inf_norm(s.u, g) * w1inf_norm(s.v, g) + np.max(np.abs(s.eta + 1.0)) ** 2)


@dataclass
class DiagnosticsSeries:
    t: list = field(default_factory=list)
    eta_mass: list = field(default_factory=list)
    min_ux: list = field(default_factory=list)
    min_vx: list = field(default_factory=list)
    criterion_integrand: list = field(default_factory=list)
    criterion_integral: list = field(default_factory=list)
    norms: list = field(default_factory=list)
    weighted: list = field(default_factory=list)
    residuals: list = field(default_factory=list)
    profile_labels: tuple = ()
    residual_kinds: tuple = ()

    def __len__(self):
        return len(self.t)

    def columns(self):
        cols = ["t", "eta_mass", "min_ux", "min_vx", "criterion_integrand", "criterion_integral"]
        cols += [f"{f}_{n}" for f in ("eta", "u", "v") for n in NORM_NAMES]
        cols += [f"wsup_{lab}" for lab in self.profile_labels]
        cols += [f"res_{k}" for k in self.residual_kinds]
        return cols

    def rows(self):
        for i in range(len(self.t)):
            row = [self.t[i], self.eta_mass[i], self.min_ux[i], self.min_vx[i],
                   self.criterion_integrand[i], self.criterion_integral[i]]
            row += [getattr(self.norms[i][f], n) for f in ("eta", "u", "v") for n in NORM_NAMES]
            row += list(self.weighted[i])
            row += list(self.residuals[i])
            yield row

    def array(self, name):
        return np.asarray(getattr(self, name), dtype=float)


@dataclass
class BlowupReport:
    detected: bool
    t_detect: float | None
    reason: str | None
    min_slope: float
    criterion_integral: float
    t_final: float
    steps: int

    def as_dict(self):
        return asdict(self)


@dataclass
class RunResult:
    series: DiagnosticsSeries
    report: BlowupReport
    snapshots: list


class _Sampler:
    def __init__(self, grid, weights, sobolev_s, residual_kinds, form):
        self.grid = grid
        self.weights = tuple(weights)
        self.sobolev_s = sobolev_s
        self.partition = LPPartition.build(grid)
        self.form = form
        self.series = DiagnosticsSeries(profile_labels=tuple(w.label for w in self.weights),
                                        residual_kinds=tuple(residual_kinds))

    def __call__(self, s):
        ser = self.series
        g = self.grid
        ux = spectral_derivative(s.u, g, 1)
        vx = spectral_derivative(s.v, g, 1)
        value = criterion_value(s)
        if ser.t:
            integral = ser.criterion_integral[-1] + 0.5 * (s.t - ser.t[-1]) * (value + ser.criterion_integrand[-1])
        else:
            integral = 0.0
        ser.t.append(float(s.t))
        ser.eta_mass.append(float(g.dx * np.sum(s.eta)))
        ser.min_ux.append(float(np.min(ux)))
        ser.min_vx.append(float(np.min(vx)))
        ser.criterion_integrand.append(value)
        ser.criterion_integral.append(integral)
        ser.norms.append(norm_suite(s, self.sobolev_s, self.partition))
        ser.weighted.append(tuple(weighted_sup(s.fields(), w, g) for w in self.weights))
        ser.residuals.append(tuple(reduction_residual(s, k, self.form) for k in ser.residual_kinds))


def max_slope(s):
    g = s.grid
    return max(float(np.max(np.abs(spectral_derivative(s.u, g, 1)))),
               float(np.max(np.abs(spectral_derivative(s.v, g, 1)))))


def run(initial, control, form="convolution", sample_every=1, weights=(), sobolev_s=2.0,
        residual_kinds=(), rhs=None, keep_snapshots=True, fixed_dt=False):
    """Integrate until ``control.t_end`` or a blow-up stop.

    Samples (diagnostics and snapshots) are taken at t = 0, every
    ``sample_every`` steps and at the final time. With ``fixed_dt`` every step
    is ``control.dt_max`` regardless of the CFL bound.
    """
    check_form(form)
    if int(sample_every) < 1:
        raise DomainError(f"sample_every must be a positive integer, got {sample_every}")
    sample_every = int(sample_every)
    sampler = _Sampler(initial.grid, weights, sobolev_s, residual_kinds, form)
    snapshots = []

    def take(st):
        sampler(st)
        if keep_snapshots:
            snapshots.append(st)

    s = initial
    take(s)
    steps = 0
    reason = None
    t_end = control.t_end
    while t_end - s.t > 1e-12 * max(1.0, t_end):
        dt = control.dt_max if fixed_dt else adaptive_dt(s, control)
        if dt < control.dt_min:
            reason = "dt_underflow"
            break
        if s.t + dt > t_end or t_end - (s.t + dt) < 1e-9 * dt:
            dt = t_end - s.t
        try:
            s_new = rk4_step(s, dt, form, rhs)
        except NumericError:
            reason = "non_finite"
            break
        steps += 1
        if max_slope(s_new) > control.slope_threshold:
            reason = "slope_threshold"
            break
        s = s_new
        if steps % sample_every == 0:
            take(s)
    ser = sampler.series
    if ser.t[-1] != s.t:
        take(s)
    g = s.grid
    min_slope = min(float(np.min(spectral_derivative(s.u, g, 1))), float(np.min(spectral_derivative(s.v, g, 1))))
    report = BlowupReport(
        detected=reason is not None,
        t_detect=float(s.t) if reason is not None else None,
        reason=reason,
        min_slope=min_slope,
        criterion_integral=float(ser.criterion_integral[-1]),
        t_final=float(s.t),
        steps=steps,
    )
    return RunResult(series=ser, report=report, snapshots=snapshots)


def sweep(jobs, workers=1):
    """Run several independent integrations; ``jobs`` maps a run id to the
    keyword arguments of :func:`run`. Results are merged by run id."""
    if workers <= 1:
        return {rid: run(**kw) for rid, kw in jobs.items()}
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = {rid: pool.submit(run, **kw) for rid, kw in jobs.items()}
        return {rid: fut.result() for rid, fut in futures.items()}
