"""Closed-form cycle statistics of A-trail-stubborn mining.

Two independent routes are kept on purpose:

* the cycle expectations (:func:`expected_cycle_duration`,
  :func:`expected_cycle_revenue`, :func:`expected_official_blocks`), from
  which :func:`analytic_metrics` derives ``delta``, ``Gamma`` and ``q~`` by
  division;
* the single-fraction formulas :func:`revenue_ratio` and
  :func:`apparent_hashrate_tsm`.

All expectations are per attack cycle; durations are in units of ``tau0``
and revenues in units of ``b``.  The private ``_*`` helpers broadcast over
numpy arrays of ``q`` and ``gamma`` (``a`` is a scalar) and are what the
sweeps use.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .params import NetworkParams, bracket, pa_eval, polyval_ascending

__all__ = [
    "AnalyticMetrics",
    "expected_sigma",
    "prob_sigma",
    "expected_cycle_duration",
    "expected_cycle_revenue",
    "expected_cycle_revenue_literal",
    "expected_official_blocks",
    "difficulty_adjustment",
    "revenue_ratio",
    "apparent_hashrate_tsm",
    "lsm_revenue_ratio",
    "lsm_apparent_hashrate",
    "apparent_hashrate_sm_gamma0",
    "apparent_hashrate_honest",
    "analytic_metrics",
]


@dataclass(frozen=True)
class AnalyticMetrics:
    e_duration: float
    e_revenue: float
    e_official: float
    delta: float
    revenue_ratio: float
    apparent_hashrate: float

    def as_dict(self) -> dict[str, float]:
        return {
            "e_duration": self.e_duration,
            "e_revenue": self.e_revenue,
            "e_official": self.e_official,
            "delta": self.delta,
            "revenue_ratio": self.revenue_ratio,
            "apparent_hashrate": self.apparent_hashrate,
        }


def _check_a(a) -> int:
    if int(a) != a or a < 1:
        raise DomainError(f"A must be an integer >= 1, got {a!r}")
    return int(a)


def _num(x):
    # scalars stay Python floats: 0-d array arithmetic is several times slower
    return np.asarray(x, dtype=float) if isinstance(x, (np.ndarray, list, tuple)) else float(x)


def _out(x):
    x = np.asarray(x, dtype=float)
    return float(x) if x.ndim == 0 else x


def _sigma_coefficients(a: int) -> list[int]:
    # (A+1)[2] - 2[A+1] divided by (1 - lam)
    if a == 1:
        return [0]
    return [a - 1, 2 * (a - 1)] + [2 * (a - k) for k in range(2, a)]


def _official_coefficients(a: int) -> list[int]:
    # (A + lam) - [A+1] divided by (1 - lam)
    if a == 1:
        return [0]
    return [a - 1, a - 1] + [a - k for k in range(2, a)]


def _e_sigma(q, a):
    q = _num(q)
    p = 1.0 - q
    lam = q / p
    return polyval_ascending(_sigma_coefficients(a), lam) / (p * bracket(a + 1, lam))


def _root_term(q, gamma):
    # sqrt(1 - 4(1-gamma)pq) + p - q; the radicand is >= (p - q)^2 > 0
    p = 1.0 - q
    return np.sqrt(1.0 - 4.0 * (1.0 - gamma) * p * q) + p - q


def _e_duration(q, gamma, a):
    q = _num(q)
    p = 1.0 - q
    return p / (p - q) + q + (1.0 - gamma) * p * q * _e_sigma(q, a)


def _kept_share(q, gamma, a):
    """``1 - 2(1-gamma) p (p-q) / (s root [A+1])`` with ``s = p + pq - q^2``, free of cancellation.

    Using ``u^2 - (p-q)^2 = 4 gamma p q`` (``u`` the square root) the plain
    difference, which is ``O(q)`` out of ``O(1)`` terms, becomes a sum of
    positive parts; ``p [A+1] - 1 = q lam [A-1]`` does the same for ``A > 1``.
    """
    p = 1.0 - q
    lam = q / p
    s = p + p * q - q**2
    root = _root_term(q, gamma)
    t = 2.0 * (1.0 - gamma) * p**2 * (p - q) / (s * root)
    kept_a1 = (2.0 * q * (p - q) * (2.0 * p - q) + 2.0 * gamma * p * (2.0 * q * s / root + p * (p - q))) / (s * root)
    if a == 1:
        return kept_a1
    return kept_a1 + t * q * lam * bracket(a - 1, lam) / (p * bracket(a + 1, lam))


def _e_revenue(q, gamma, a):
    q = _num(q)
    p = 1.0 - q
    lam = q / p
    b_a1 = bracket(a + 1, lam)
    win_trail = lam**2 * (bracket(a - 1, lam) + pa_eval(a, lam) / (p * b_a1)) / b_a1
    return (p + p * q - q**2) / (p - q) * q * _kept_share(q, gamma, a) + (1.0 - gamma) * p * q * win_trail


def _e_official(q, gamma, a):
    q = _num(q)
    p = 1.0 - q
    lam = q / p
    trail = polyval_ascending(_official_coefficients(a), lam) / bracket(a + 1, lam)
    return (p * q + p - q) / (p - q) + (1.0 - gamma) * q * trail


def _main_numerator(q, gamma, a):
    q = _num(q)
    p = 1.0 - q
    lam = q / p
    s = p + p * q - q**2
    b_a1 = bracket(a + 1, lam)
    win = (bracket(a - 1, lam) + pa_eval(a, lam) / (p * b_a1)) * lam**2
    return q * _kept_share(q, gamma, a) + (1.0 - gamma) * p * q * (p - q) / (s * b_a1) * win


def _main_gamma(q, gamma, a):
    q = _num(q)
    p = 1.0 - q
    lam = q / p
    s = p + p * q - q**2
    den = 1.0 + (1.0 - gamma) * p * q / s * (a + 1) * (bracket(2, lam) / bracket(a + 1, lam) - 2.0 / (a + 1))
    return _main_numerator(q, gamma, a) / den


def _main_apparent(q, gamma, a):
    q = _num(q)
    p = 1.0 - q
    lam = q / p
    s = p + p * q - q**2
    den = (p + p * q - q) / s + (1.0 - gamma) * p * q / s * (a + lam) * (
        1.0 / bracket(a + 1, lam) - 1.0 / (a + lam)
    )
    return _main_numerator(q, gamma, a) / den


def _lsm_numerator(q, gamma):
    # q s - 2(1-gamma) p^2 q (p-q) / root, regrouped so that no terms cancel
    q = _num(q)
    p = 1.0 - q
    root = np.sqrt(1.0 - 4.0 * (1.0 - gamma) * p * q) + p - q
    s = p + p * q - q**2
    return q / root * (2.0 * q * (p - q) * (2.0 * p - q) + 4.0 * gamma * p * q * s / root + 2.0 * gamma * p**2 * (p - q))


def _sm_gamma0(q):
    q = _num(q)
    p = 1.0 - q
    return (p * q**2 + (p - q) * (q + p * q**2 - p**2 * q)) / (p**2 * q + p - q)


def expected_sigma(params: NetworkParams, a: int) -> float:
    """Expected trail-phase duration (units of ``tau0``), when there is one."""
    return _out(_e_sigma(params.q, _check_a(a)))


def prob_sigma(params: NetworkParams) -> float:
    """Probability that the attacker loses the decisive competition to an honest-on-honest block."""
    return (1.0 - params.gamma) * params.p * params.q


def expected_cycle_duration(params: NetworkParams, a: int) -> float:
    return _out(_e_duration(params.q, params.gamma, _check_a(a)))


def expected_cycle_revenue(params: NetworkParams, a: int) -> float:
    return _out(_e_revenue(params.q, params.gamma, _check_a(a)))


def expected_cycle_revenue_literal(params: NetworkParams, a: int) -> float:
    """Expected revenue with every ``lam`` power written out (``a >= 2`` only).

    Kept as a cross-check of :func:`expected_cycle_revenue`; it loses digits
    as ``q -> 1/2`` and has a removable ``0/0`` at ``a = 1``.
    """
    a = _check_a(a)
    if a < 2:
        raise DomainError("the expanded revenue form is singular at A = 1")
    q, gamma, p, lam = params.q, params.gamma, params.p, params.lam
    if q == 0.0:
        return 0.0
    num = 1 - a * lam ** (a - 1) + a * lam ** (a + 1) - lam ** (2 * a)
    trail = 1 + num / (p * (1 - lam) * (1 - lam ** (a - 1)) * (1 - lam ** (a + 1)))
    bracket_term = trail * (lam**2 - lam ** (a + 1)) / (1 - lam ** (a + 1)) - 2 * p / (
        np.sqrt(1 - 4 * (1 - gamma) * p * q) + p - q
    ) * (1 - lam**2) / (1 - lam ** (a + 1))
    return float((p + p * q - q**2) / (p - q) * q + (1 - gamma) * p * q * bracket_term)


def expected_official_blocks(params: NetworkParams, a: int) -> float:
    """Expected height gained by the official chain over one cycle."""
    return _out(_e_official(params.q, params.gamma, _check_a(a)))


def difficulty_adjustment(params: NetworkParams, a: int) -> float:
    return expected_cycle_duration(params, a) / expected_official_blocks(params, a)


def revenue_ratio(params: NetworkParams, a: int) -> float:
    """Revenue ratio in units of ``b / tau0``, as one closed fraction."""
    g = _main_gamma(params.q, params.gamma, _check_a(a))
    return _out(g * params.b / params.tau0)


def apparent_hashrate_tsm(params: NetworkParams, a: int) -> float:
    """Apparent hashrate after difficulty adjustment, as one closed fraction."""
    return _out(_main_apparent(params.q, params.gamma, _check_a(a)))


def lsm_revenue_ratio(params: NetworkParams) -> float:
    """Lead-stubborn revenue ratio (``b / tau0``), coded without brackets or ``P_A``."""
    q, p = params.q, params.p
    return _out(_lsm_numerator(q, params.gamma) / (p + p * q - q**2) * params.b / params.tau0)


def lsm_apparent_hashrate(params: NetworkParams) -> float:
    q, p = params.q, params.p
    return _out(_lsm_numerator(q, params.gamma) / (p + p * q - q))


def apparent_hashrate_sm_gamma0(q: float) -> float:
    """Selfish-mining apparent hashrate at ``gamma = 0``."""
    if not (0.0 <= q < 0.5):
        raise DomainError(f"q must satisfy 0 <= q < 1/2, got {q!r}")
    return _out(_sm_gamma0(q))


def apparent_hashrate_honest(q: float) -> float:
    return float(q)


def analytic_metrics(params: NetworkParams, a: int) -> AnalyticMetrics:
    """All six cycle-level quantities; the ratios are formed from the expectations."""
    e_dur = expected_cycle_duration(params, a)
    e_rev = expected_cycle_revenue(params, a)
    e_off = expected_official_blocks(params, a)
    return AnalyticMetrics(
        e_duration=e_dur,
        e_revenue=e_rev,
        e_official=e_off,
        delta=e_dur / e_off,
        revenue_ratio=e_rev / e_dur * params.b / params.tau0,
        apparent_hashrate=e_rev / e_off,
    )
