import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from dp3.spectral import Grid

settings.register_profile("dp3", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("dp3")


@pytest.fixture
def g2pi():
    return Grid(2 * np.pi, 64)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def rel_l2(a, b):
    a, b = np.asarray(a), np.asarray(b)
    den = np.linalg.norm(b)
    return np.linalg.norm(a - b) / den if den > 0 else np.linalg.norm(a - b)


def band_limited(grid, rng, band=8, amp=1.0):
    c = np.zeros(grid.n_points // 2 + 1, dtype=complex)
    c[: band + 1] = rng.standard_normal(band + 1) + 1j * rng.standard_normal(band + 1)
    c[0] = c[0].real
    f = np.fft.irfft(c, n=grid.n_points)
    return amp * f / np.max(np.abs(f))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
