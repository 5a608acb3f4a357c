import numpy as np
import pytest
from hypothesis import given, strategies as st

from dp3.errors import DomainError
from dp3.evolution import StepControl, run
from dp3.norms import WeightProfile, weighted_sup
from dp3.persistence import (flux_decay_audit, growth_rate, persistence_track, rho_decay_classify,
                             selected_fields)
from dp3.spectral import Grid, spectral_derivative
from dp3.state import make_initial, zero_state

G = Grid(16 * np.pi, 512)


def gaussian_run(eta=0.3, t_end=0.1):
    s0 = make_initial("gaussian", {"eta": {"amp": eta}, "u": {"amp": 0.5}, "v": {"amp": 0.5}}, G)
    return run(s0, StepControl(dt_max=0.005, t_end=t_end), sample_every=2).snapshots


def test_zero_run():
    snaps = run(zero_state(G), StepControl(dt_max=0.05, t_end=0.2)).snapshots
    out = persistence_track(snaps, [WeightProfile("log", 1.0, 10.0)])
    assert all(v == 0 for v in out["log_b1_N10"]["sup"]) and out["log_b1_N10"]["kappa"] == 0.0
    label, ladder = rho_decay_classify(snaps, 1.0, 0.6, [4, 8, 16])
    assert label == "little_o" and all(v == 0 for v in ladder["s"])
    rep = flux_decay_audit(snaps, 1.0, 0.6, [2, 4, 8])
    assert all(v == 0 for v in rep["rho_x_uv"] + rep["rho_div_uv"])


def test_initial_sup_is_direct_evaluation():
    snaps = gaussian_run(t_end=0.01)
    p = WeightProfile("algebraic", 1.0, 30.0)
    out = persistence_track(snaps, [p], selector=("u",))
    s0 = snaps[0]
    direct = np.max(np.abs(s0.u) * (1 + 1.0 + np.abs(G.x)))
    assert abs(out[p.label]["sup"][0] - direct) <= 1e-10
    full = persistence_track(snaps, [p], selector=("rho", "u_x", "v_xx"))
    expect = max(weighted_sup([f], p, G) for f in (s0.eta, spectral_derivative(s0.u, G), spectral_derivative(s0.v, G, 2)))
    assert full[p.label]["sup"][0] == expect


@pytest.mark.parametrize("kind", ["log", "algebraic"])
def test_sup_stays_within_twice_initial(kind):
    snaps = gaussian_run()
    p = WeightProfile(kind, 1.0, 15.0)
    out = persistence_track(snaps, [p])[p.label]
    assert max(out["sup"]) <= 2 * out["sup"][0]
    t = np.array([s.t for s in snaps])
    assert np.all(np.array(out["sup"]) <= np.exp(out["kappa"] * t) * out["sup"][0] * (1 + 1e-12))


def test_selector_validation():
    snaps = gaussian_run(t_end=0.01)
    with pytest.raises(DomainError):
        persistence_track(snaps, [WeightProfile("log", 1.0, 5.0)], selector=("w",))
    with pytest.raises(DomainError):
        persistence_track([], [WeightProfile("log", 1.0, 5.0)])
    with pytest.raises(DomainError):
        persistence_track(snaps, [])
    assert set(selected_fields(snaps[0], ("rho_x", "u_xx"))) == {"rho_x", "u_xx"}


@given(st.floats(0.1, 3.0), st.floats(0.0, 2.0), st.floats(0.5, 3.0))
def test_weighted_sup_monotone_in_beta(beta, extra, width):
    g = Grid(30.0, 128)
    s = make_initial("gaussian", {"u": {"width": width}}, g)
    lo = weighted_sup([s.u], WeightProfile("algebraic", beta, 10.0), g)
    hi = weighted_sup([s.u], WeightProfile("algebraic", beta + extra, 10.0), g)
    assert hi >= lo


def test_growth_rate():
    assert growth_rate([0, 1, 2], [1.0, np.e, np.e]) == pytest.approx(1.0)
    assert growth_rate([0, 1], [1.0, 0.5]) == 0.0
    assert growth_rate([0, 1], [0.0, 0.0]) == 0.0


def test_classify_compact_velocities():
    snaps = gaussian_run(eta=0.0)
    assert np.all(snaps[0].eta == 0)
    label, ladder = rho_decay_classify(snaps, 1.0, 0.6, [4, 8, 16])
    assert label == "little_o"
    assert ladder["N"] == [4.0, 8.0, 16.0]


def test_classify_constant_offset():
    s0 = make_initial("constant", {"eta": {"value": 0.1}}, G)
    snaps = run(s0, StepControl(dt_max=0.05, t_end=0.1)).snapshots
    label, ladder = rho_decay_classify(snaps, 1.0, 0.6, [4, 8, 16])
    assert label in ("big_O", "unbounded")
    # the tail sup is attained at the box edge, so it cannot drop along the ladder
    assert ladder["s"][0] == ladder["s"][-1] > 0


def test_classify_validation():
    snaps = gaussian_run(t_end=0.01)
    with pytest.raises(DomainError):
        rho_decay_classify(snaps, 1.0, 0.2, [4, 8])
    with pytest.raises(DomainError):
        rho_decay_classify(snaps, 1.0, 1.0, [4, 8])
    with pytest.raises(DomainError):
        rho_decay_classify(snaps, 1.0, 0.6, [4, 0.4 * G.L])
    with pytest.raises(DomainError):
        rho_decay_classify(snaps, 1.0, 0.6, [8, 4])


def log_decay_run(eta_amp):
    p = {"power": 0.6, "beta": 1.0, "amp": 0.5}
    fields = {"u": p, "v": p}
    if eta_amp:
        fields["eta"] = dict(p, amp=eta_amp)
    return run(make_initial("log_decay", fields, G), StepControl(dt_max=0.005, t_end=0.1)).snapshots


def test_flux_envelope_stable_under_doubling():
    rep = flux_decay_audit(log_decay_run(0.2), 1.0, 0.6, [2.0, 4.0, 8.0])
    assert rep["envelope_variation"] < 2.0


def test_flux_terms_below_density_envelope():
    s0 = make_initial("log_decay", {"eta": {"power": 0.3, "beta": 1.0, "amp": 0.3}}, G)
    s0 = s0.with_fields(0.0, s0.eta, 0.5 * np.exp(-G.x**2), 0.5 * np.exp(-G.x**2))
    snaps = run(s0, StepControl(dt_max=0.005, t_end=0.1)).snapshots
    xs = [2.0, 4.0, 8.0]
    rep = flux_decay_audit(snaps, 1.0, 0.6, xs)
    rho_far = np.interp(xs, G.x, np.abs(s0.eta))
    assert np.all(np.array(rep["rho_x_uv"]) < rho_far)
    assert np.all(np.array(rep["rho_div_uv"]) < rho_far)
    assert rep["rho_div_uv"][-1] < rep["rho_div_uv"][0]


def test_flux_validation():
    snaps = gaussian_run(t_end=0.01)
    with pytest.raises(DomainError):
        flux_decay_audit(snaps[:1], 1.0, 0.6, [2.0])
    with pytest.raises(DomainError):
        flux_decay_audit(snaps, 1.0, 0.6, [0.4 * G.L])
    with pytest.raises(DomainError):
        flux_decay_audit(snaps, 1.0, 2.0, [2.0])
