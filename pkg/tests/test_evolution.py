import numpy as np
import pytest

from dp3.errors import DomainError, NumericError
from dp3.evolution import StepControl, adaptive_dt, criterion_value, rk4_step, run, sweep
from dp3.norms import NORM_NAMES, WeightProfile
from dp3.spectral import Grid, helmholtz_apply
from dp3.state import FieldState, make_initial, zero_state

G = Grid(16 * np.pi, 256)


def gaussian_state(eta=0.3, u=0.5, v=0.5, grid=G):
    return make_initial("gaussian", {"eta": {"amp": eta}, "u": {"amp": u}, "v": {"amp": v, "center": 0.5}}, grid)


def reduced(u, v, grid=G):
    return FieldState(0.0, np.full(grid.n_points, -1.0), u, v, grid)


def test_step_control_validation():
    with pytest.raises(DomainError):
        StepControl(dt_max=1e-3, t_end=1.0, dt_min=1e-2)
    with pytest.raises(DomainError):
        StepControl(dt_max=-1.0, t_end=1.0)
    with pytest.raises(DomainError):
        StepControl(dt_max=0.1, t_end=1.0, cfl=1.5)
    with pytest.raises(DomainError):
        StepControl(dt_max=0.1, t_end=-1.0)
    with pytest.raises(DomainError):
        rk4_step(zero_state(G), 0.0)


def test_zero_state_fixed_point(g2pi):
    s = rk4_step(zero_state(g2pi), 0.1)
    assert s.t == pytest.approx(0.1)
    assert all(np.all(f == 0) for f in s.fields())


def test_single_step_pressure_growth(g2pi):
    x = g2pi.x
    s = FieldState(0.0, np.zeros(64), np.zeros(64), np.cos(x), g2pi)
    dt = 1e-3
    s1 = rk4_step(s, dt)
    assert np.max(np.abs(s1.v - s.v - dt * np.cos(x) / 2)) < dt**2
    # v_t = v/2 exactly here, so RK4 is within dt^5 of the exponential
    assert np.max(np.abs(s1.v - np.exp(dt / 2) * np.cos(x))) < 1e-15 + dt**5
    half = rk4_step(rk4_step(s, dt / 2), dt / 2)
    assert np.max(np.abs(half.v - s1.v)) < 1e-14


def test_stage_failure_is_reported(g2pi):
    def bad(st):
        return tuple(np.full(64, np.nan) for _ in range(3))

    with pytest.raises(NumericError, match="stage"):
        rk4_step(zero_state(g2pi), 0.1, rhs=bad)


def test_rk4_self_convergence_order():
    g = Grid(16 * np.pi, 128)
    s0 = make_initial("gaussian", {"eta": {"amp": 0.5}, "u": {"amp": 0.8}, "v": {"amp": 0.8}}, g)
    dts = [0.2, 0.1, 0.05, 0.025]
    finals = [np.concatenate(run(s0, StepControl(dt_max=dt, t_end=1.0), fixed_dt=True).snapshots[-1].fields())
              for dt in dts]
    errs = [np.linalg.norm(a - b) for a, b in zip(finals[:-1], finals[1:])]
    slope = np.polyfit(np.log(dts[:-1]), np.log(errs), 1)[0]
    assert slope >= 3.8


def test_adaptive_dt():
    g = Grid(6.4, 64)
    c = StepControl(dt_max=1.0, t_end=1.0, cfl=0.3)
    assert adaptive_dt(zero_state(g), c) == 1.0
    r2 = np.full(64, np.sqrt(2.0))
    s = FieldState(0.0, np.zeros(64), r2, r2, g)
    assert adaptive_dt(s, c) == pytest.approx(0.015, rel=1e-12)


def test_underflow_stops_run():
    g = Grid(6.4, 64)
    big = np.full(64, np.sqrt(1e9))
    s = FieldState(0.0, np.zeros(64), big, big, g)
    res = run(s, StepControl(dt_max=0.1, t_end=1.0, dt_min=1e-9))
    assert res.report.detected and res.report.reason == "dt_underflow" and res.report.steps == 0


def test_zero_run_has_no_detection():
    res = run(zero_state(G), StepControl(dt_max=0.1, t_end=1.0))
    assert not res.report.detected and res.report.t_final == pytest.approx(1.0)
    for rep in res.series.norms:
        assert all(getattr(rep[f], n) == 0 for f in ("eta", "u", "v") for n in NORM_NAMES)


def test_criterion_value(g2pi):
    x = g2pi.x
    assert criterion_value(zero_state(g2pi)) == 1.0
    assert criterion_value(FieldState(0.0, np.full(64, -1.0), np.zeros(64), np.zeros(64), g2pi)) == 0.0
    s = FieldState(0.0, np.zeros(64), np.sin(x), np.cos(x), g2pi)
    assert criterion_value(s) == pytest.approx(5.0, abs=1e-12)


def test_eta_mass_conserved():
    s0 = gaussian_state()
    res = run(s0, StepControl(dt_max=0.01, t_end=1.0), sample_every=10)
    mass = res.series.array("eta_mass")
    assert not res.report.detected
    assert np.max(np.abs(mass - mass[0])) <= 1e-8 * (1 + abs(mass[0]))


def test_dp_reduction_run():
    u0 = 0.5 * np.exp(-G.x**2)
    res = run(reduced(u0, np.ones(256)), StepControl(dt_max=0.01, t_end=0.5), residual_kinds=("dp",))
    assert max(r[0] for r in res.series.residuals) <= 1e-10
    masses = [G.dx * np.sum(helmholtz_apply(s.u, G)) for s in res.snapshots]
    assert np.max(np.abs(np.array(masses) - masses[0])) <= 1e-8


def test_novikov_run():
    u0 = 0.5 * np.exp(-G.x**2)
    res = run(reduced(u0, u0.copy()), StepControl(dt_max=0.01, t_end=0.5))
    assert max(np.max(np.abs(s.u - s.v)) for s in res.snapshots) <= 1e-8


def test_swap_symmetric_runs():
    u0 = 0.5 * np.exp(-G.x**2)
    v0 = 0.4 * np.exp(-((G.x - 1.0) ** 2))
    c = StepControl(dt_max=0.01, t_end=0.5)
    a = run(reduced(u0, v0), c)
    b = run(reduced(v0, u0), c)
    assert [s.t for s in a.snapshots] == [s.t for s in b.snapshots]
    for sa, sb in zip(a.snapshots, b.snapshots):
        assert np.max(np.abs(sa.u - sb.v)) <= 1e-10 and np.max(np.abs(sa.v - sb.u)) <= 1e-10


def test_forms_give_same_trajectory():
    s0 = gaussian_state()
    c = StepControl(dt_max=0.01, t_end=0.1)
    a = run(s0, c, form="convolution", fixed_dt=True).snapshots[-1]
    b = run(s0, c, form="flux", fixed_dt=True).snapshots[-1]
    for fa, fb in zip(a.fields(), b.fields()):
        assert np.max(np.abs(fa - fb)) <= 1e-8


def test_series_layout():
    prof = WeightProfile("log", 1.0, 5.0)
    res = run(gaussian_state(), StepControl(dt_max=0.05, t_end=0.2), sample_every=2, weights=[prof],
              residual_kinds=("swap",))
    cols = res.series.columns()
    assert cols[:6] == ["t", "eta_mass", "min_ux", "min_vx", "criterion_integrand", "criterion_integral"]
    assert cols[-2:] == ["wsup_log_b1_N5", "res_swap"]
    rows = list(res.series.rows())
    assert all(len(r) == len(cols) for r in rows)
    assert rows[0][0] == 0.0 and rows[-1][0] == pytest.approx(0.2)
    assert res.series.criterion_integral[0] == 0.0
    assert np.all(np.diff(res.series.array("criterion_integral")) > 0)
    with pytest.raises(DomainError):
        run(gaussian_state(), StepControl(dt_max=0.05, t_end=0.2), sample_every=0)


def test_sweep_matches_serial():
    c = StepControl(dt_max=0.05, t_end=0.2)
    jobs = {"a": {"initial": gaussian_state(), "control": c}, "b": {"initial": gaussian_state(u=0.2), "control": c}}
    par = sweep(jobs, workers=2)
    ser = sweep(jobs, workers=1)
    for key in jobs:
        assert np.array_equal(par[key].snapshots[-1].u, ser[key].snapshots[-1].u)
