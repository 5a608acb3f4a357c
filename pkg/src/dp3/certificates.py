"""Closed-form blow-up bounds evaluated from initial data alone.

Given the base quantity

    B = ||eta0||_{W11}/2 + 1 + ||u0||_{W11} + ||n0||_inf,

the certificate collects

    T1  = 1 / (40 B^2)
    T2  = v0(x0) / (40 B^3)
    b1  = B^4 / (4 v0(x0)) + 6 B^3
    a   = v0(x0) / 4
    rhs = 2 (1 + E) / (1 - E) * sqrt(b1 / v0(x0)),   E = exp(sqrt(v0(x0) b1) T2)
    T0  = ln((f0 - k) / (f0 + k)) / (2 sqrt(a b1)),  k = sqrt(b1 / a)

and reports each sub-condition of the blow-up verdict separately.
"""
import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import DomainError, HypothesisError, ThresholdError
from .norms import check_decay, w11_norm
from .spectral import helmholtz_apply, interpolate, spectral_derivative

EXP_LIMIT = 700.0


def base_quantity(s0, check=True):
    g = s0.grid
    if check:
        check_decay(s0.eta, g, "eta0")
        check_decay(s0.u, g, "u0")
    n0 = helmholtz_apply(s0.v, g)
    return 0.5 * w11_norm(s0.eta, g) + 1.0 + w11_norm(s0.u, g) + float(np.max(np.abs(n0)))


def _positive_v0(v0):
    if not v0 > 0:
        raise HypothesisError(f"v0(x0) must be strictly positive, got {v0!r}")


def times_T1_T2(B, v0):
    _positive_v0(v0)
    if not B >= 1:
        raise DomainError(f"base quantity must be at least 1, got {B!r}")
    return 1.0 / (40.0 * B**2), v0 / (40.0 * B**3)


def b1_of(B, v0):
    _positive_v0(v0)
    return B**4 / (4.0 * v0) + 6.0 * B**3


def condition14(f0, v0, b1, T2):
    """Right side of the slope condition and whether f0 meets it.

    (1 + E)/(1 - E) = -coth(x/2) with x = sqrt(v0 b1) T2, evaluated without
    forming E; for x > 700 the ratio is taken as its limit -1.
    """
    _positive_v0(v0)
    if not T2 > 0:
        raise DomainError(f"T2 must be positive, got {T2!r}")
    x = math.sqrt(v0 * b1) * T2
    ratio = -1.0 if x > EXP_LIMIT else -1.0 / math.tanh(0.5 * x)
    rhs = 2.0 * ratio * math.sqrt(b1 / v0)
    return rhs, bool(f0 <= rhs)


def riccati_threshold(a, b):
    return -math.sqrt(b / a)


def lemma29_time(a, b, f0):
    """Upper bound on the blow-up time of f' <= -a f^2 + b from f(0) = f0."""
    if not (a > 0 and b > 0):
        raise DomainError(f"need a > 0 and b > 0, got a={a!r}, b={b!r}")
    k = math.sqrt(b / a)
    if not f0 < -k:
        raise ThresholdError(f"f0={f0!r} is not below the threshold {-k!r}", -k)
    # ln((f0-k)/(f0+k)) = log1p(2k/(-f0-k)) keeps precision when |f0| >> k
    return math.log1p(2.0 * k / (-f0 - k)) / (2.0 * math.sqrt(a * b))


@dataclass
class BlowupCertificate:
    x0: float
    v0_at_x0: float
    f0: float
    B: float
    T1: float
    T2: float
    b1: float
    a: float
    rhs14: float
    cond14_ok: bool
    riccati_threshold: float
    lemma29_ok: bool
    T0: float | None
    T0_le_T2: bool
    T2_le_T1: bool
    verdict: bool
    hypothesis_note: str = ("strict positivity of v0(x0) is required; "
                            "v0(x0) = 0 is rejected")

    def as_dict(self):
        return asdict(self)


def certify(s0, x0=0.0, check=True):
    """Assemble every closed-form bound and the blow-up verdict for ``s0``."""
    g = s0.grid
    v0 = float(interpolate(s0.v, g, x0)[0])
    _positive_v0(v0)
    f0 = float(interpolate(spectral_derivative(s0.u, g, 1), g, x0)[0])
    B = base_quantity(s0, check=check)
    T1, T2 = times_T1_T2(B, v0)
    b1 = b1_of(B, v0)
    a = v0 / 4.0
    rhs14, cond14 = condition14(f0, v0, b1, T2)
    thr = riccati_threshold(a, b1)
    lemma_ok = f0 < thr
    T0 = lemma29_time(a, b1, f0) if lemma_ok else None
    t0_ok = T0 is not None and T0 <= T2
    t2_ok = T2 <= T1
    return BlowupCertificate(
        x0=float(x0), v0_at_x0=v0, f0=f0, B=B, T1=T1, T2=T2, b1=b1, a=a,
        rhs14=rhs14, cond14_ok=cond14, riccati_threshold=thr, lemma29_ok=bool(lemma_ok),
        T0=T0, T0_le_T2=bool(t0_ok), T2_le_T1=bool(t2_ok),
        verdict=bool(cond14 and lemma_ok and t0_ok and t2_ok),
    )
