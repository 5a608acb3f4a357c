"""Lagrangian tracking along dq/dt = (uv)(t, q) and the Riccati slope monitor."""
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .rhs import field_rhs
from .spectral import interpolate, spectral_derivative


@dataclass
class CharTrace:
    """Samples of one characteristic started at ``x0``.

    ``q`` is wrapped into the box; ``q_path`` is the continuous (unwrapped)
    position used for ordering checks.
    """

    x0: float
    t: list = field(default_factory=list)
    q: list = field(default_factory=list)
    q_path: list = field(default_factory=list)
    f: list = field(default_factory=list)
    u_at_q: list = field(default_factory=list)
    v_at_q: list = field(default_factory=list)
    margin: list = field(default_factory=list)

    def rows(self):
        margin = self.margin if len(self.margin) == len(self.t) else [float("nan")] * len(self.t)
        return zip(self.t, self.q, self.f, self.v_at_q, margin)


def _wrap(q, L):
    return (q + 0.5 * L) % L - 0.5 * L


def _record(trace, s, q_path):
    g = s.grid
    q = float(_wrap(q_path, g.L))
    trace.t.append(float(s.t))
    trace.q.append(q)
    trace.q_path.append(float(q_path))
    trace.f.append(float(interpolate(spectral_derivative(s.u, g, 1), g, q)[0]))
    trace.u_at_q.append(float(interpolate(s.u, g, q)[0]))
    trace.v_at_q.append(float(interpolate(s.v, g, q)[0]))


def start_trace(s, x0):
    trace = CharTrace(x0=float(x0))
    _record(trace, s, float(x0))
    return trace


def velocity_rate(s, form="convolution", rates=None):
    """(uv, d(uv)/dt) on the grid."""
    _, ut, vt = rates if rates is not None else field_rhs(s, form)
    return s.u * s.v, ut * s.v + s.u * vt


def advance_char(trace, s0, s1, form="convolution", rates0=None, rates1=None):
    """Advance ``trace`` from s0.t to s1.t with RK4 in time.

    Between the two stored states the velocity uv is a cubic Hermite
    interpolant in time (values and time derivatives at both ends) and a
    trigonometric interpolant in space.
    """
    if abs(trace.t[-1] - s0.t) > 1e-12 * max(1.0, abs(s0.t)):
        raise DomainError(f"trace ends at t={trace.t[-1]}, step starts at t={s0.t}")
    dt = s1.t - s0.t
    if not dt > 0:
        raise DomainError("states must be in increasing time order")
    g = s0.grid
    w0, w0t = velocity_rate(s0, form, rates0)
    w1, w1t = velocity_rate(s1, form, rates1)

    def vel(theta, q):
        vals = [float(interpolate(a, g, _wrap(q, g.L))[0]) for a in (w0, w0t, w1, w1t)]
        t2, t3 = theta * theta, theta * theta * theta
        h00 = 2 * t3 - 3 * t2 + 1
        h10 = t3 - 2 * t2 + theta
        h01 = -2 * t3 + 3 * t2
        h11 = t3 - t2
        return h00 * vals[0] + h10 * dt * vals[1] + h01 * vals[2] + h11 * dt * vals[3]

    q = trace.q_path[-1]
    k1 = vel(0.0, q)
    k2 = vel(0.5, q + 0.5 * dt * k1)
    k3 = vel(0.5, q + 0.5 * dt * k2)
    k4 = vel(1.0, q + dt * k3)
    q_new = q + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
    _record(trace, s1, q_new)
    return trace


def track(snapshots, x0s, form="convolution"):
    """Traces for every start point across a list of time-ordered states."""
    traces = [start_trace(snapshots[0], x0) for x0 in x0s]
    rates = field_rhs(snapshots[0], form)
    for s0, s1 in zip(snapshots[:-1], snapshots[1:]):
        rates1 = field_rhs(s1, form)
        for tr in traces:
            advance_char(tr, s0, s1, form, rates, rates1)
        rates = rates1
    return traces


def riccati_check(trace, a, b, tol=None, t_limit=None):
    """Margin -a f^2 + b - f' along the trace and whether it stays above -tol.

    f' uses second-order differences, centred inside and one-sided at the ends.
    Samples with t > t_limit are reported but not judged.
    """
    if len(trace.t) < 3:
        raise DomainError("riccati_check needs at least three samples")
    if not (a > 0 and b > 0):
        raise DomainError(f"need a > 0 and b > 0, got a={a}, b={b}")
    tol = 1e-2 * (1.0 + b) if tol is None else tol
    t = np.asarray(trace.t)
    f = np.asarray(trace.f)
    fp = np.gradient(f, t, edge_order=2)
    margin = -a * f**2 + b - fp
    trace.margin = margin.tolist()
    judged = margin if t_limit is None else margin[t <= t_limit]
    ok = bool(judged.size == 0 or np.min(judged) >= -tol)
    return margin, ok


def order_preserved(paths):
    """True when probe positions keep their initial order at every sample.

    ``paths`` has one row per probe, one column per sample time.
    """
    paths = np.asarray(paths, dtype=float)
    order = np.argsort(paths[:, 0], kind="stable")
    ordered = paths[order]
    return bool(np.all(np.diff(ordered, axis=0) > 0))


def monotone_diffeo_check(snapshots, probes, form="convolution"):
    if len(probes) < 2:
        raise DomainError("need at least two probe points")
    traces = track(snapshots, sorted(probes), form)
    return order_preserved([tr.q_path for tr in traces])


def material_mismatch(trace, snapshots, form="convolution"):
    """Max relative gap between d/dt u(t, q(t)) along the trace and the
    Eulerian material derivative u_t + uv u_x at the same points."""
    t = np.asarray(trace.t)
    lag, inner = _time_derivative(t, np.asarray(trace.u_at_q))
    eul = []
    for s, q in zip(snapshots, trace.q):
        g = s.grid
        _, ut, _ = field_rhs(s, form)
        mat = ut + s.u * s.v * spectral_derivative(s.u, g, 1)
        eul.append(float(interpolate(mat, g, q)[0]))
    eul = np.asarray(eul)
    scale = max(1e-300, float(np.max(np.abs(eul))))
    return float(np.max(np.abs(lag - eul)[inner]) / scale)


def _time_derivative(t, y):
    """d/dt of samples and the slice where it is trusted.

    Uniform sampling gets the 4th-order five-point stencil on the interior;
    otherwise second-order centred differences.
    """
    h = np.diff(t)
    if t.size >= 5 and np.allclose(h, h[0], rtol=1e-9, atol=0):
        d = np.full(t.size, np.nan)
        d[2:-2] = (y[:-4] - 8 * y[1:-3] + 8 * y[3:-1] - y[4:]) / (12 * h[0])
        return d, slice(2, -2)
    return np.gradient(y, t), slice(1, -1)
