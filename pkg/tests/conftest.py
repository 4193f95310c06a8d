"""Shared oracles for the test suite.

The exact hiker solver below is written from the Markov-chain first-step
equations only; it shares no code with ``trailmining.hiker``.
"""

from fractions import Fraction

import pytest


def _solve_exact(a, b):
    """Gauss-Jordan elimination over the rationals."""
    n = len(b)
    rows = [list(r) + [v] for r, v in zip(a, b)]
    for c in range(n):
        piv = next(r for r in range(c, n) if rows[r][c] != 0)
        rows[c], rows[piv] = rows[piv], rows[c]
        inv = 1 / rows[c][c]
        rows[c] = [x * inv for x in rows[c]]
        for r in range(n):
            if r != c and rows[r][c] != 0:
                f = rows[r][c]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[c])]
    return [rows[r][n] for r in range(n)]


def exact_hiker(m, M, p):
    """Exact (P[low], E[nu], E[nu|low], E[nu|high], E[left|low], E[right|high]) for rational p."""
    p = Fraction(p)
    q = 1 - p
    n = M - 1  # interior states 1..M-1

    def system(rhs_of, h=None):
        a = [[Fraction(0)] * n for _ in range(n)]
        b = [Fraction(0)] * n
        for i in range(1, M):
            r = i - 1
            a[r][r] = Fraction(1)
            if i + 1 < M:
                a[r][r + 1] -= p
            if i - 1 > 0:
                a[r][r - 1] -= q
            b[r] = rhs_of(i)
        return [Fraction(0)] + _solve_exact(a, b) + [Fraction(0)]

    # P[low] from i: h(i) = p h(i+1) + q h(i-1), h(0)=1, h(M)=0
    h = system(lambda i: q if i == 1 else Fraction(0))
    h[0] = Fraction(1)
    t = system(lambda i: Fraction(1))
    # joint expectations g(i) = E[f * 1_low]: g(i) = h(i)*c + p g(i+1) + q g(i-1)
    joint_t_low = system(lambda i: h[i])
    joint_left_low = system(lambda i: q * h[i - 1])
    hh = [1 - x for x in h]
    joint_t_high = system(lambda i: hh[i])
    joint_right_high = system(lambda i: p * hh[i + 1])
    if m in (0, M):
        return h[m], t[m], None, None, None, None
    return (
        h[m],
        t[m],
        joint_t_low[m] / h[m],
        joint_t_high[m] / hh[m],
        joint_left_low[m] / h[m],
        joint_right_high[m] / hh[m],
    )


@pytest.fixture(scope="session")
def exact_hiker_oracle():
    return exact_hiker


def series_cycle_expectations(q, gamma, a, n_terms=6000):
    """(E[duration], E[revenue], E[official height]) of one A-trail-stubborn cycle.

    Sums over the first-phase length n with P[n] = C_{n-1} (pq)^n, using the
    exact hiker solve for the trail phase and the direct Bernoulli sum for
    E[Z | n]. Durations are event counts (units of tau0).
    """
    p = 1.0 - q
    # trail phase: hiker from 2 on [0, a+1]; a = 1 means the walk starts absorbed high
    if a == 1:
        p_low, steps, left_low, right_high = 0.0, 0.0, 0.0, 0.0
    else:
        pf = Fraction(p).limit_denominator(10**12)
        h, t, _, _, left, right = exact_hiker(2, a + 1, pf)
        p_low, steps, left_low, right_high = float(h), float(t), float(left), float(right)
    e_dur, e_rev, e_off = p, 0.0, p
    pn = 0.0
    ez = 0.0  # sum_{j<n} j gamma (1-gamma)^(n-1-j), built up one term at a time
    for n in range(1, n_terms):
        pn = p * q if n == 1 else pn * p * q * 2 * (2 * n - 3) / n
        if n > 1:
            ez = (1 - gamma) * ez + (n - 1) * gamma
        if pn == 0.0:
            break
        e_dur += pn * (2 * n + 1 + (1 - gamma) * p * steps)
        e_rev += pn * (
            q * (n + 1)
            + gamma * p * n
            + (1 - gamma) * p * (p_low * (n + left_low) + (1 - p_low) * ez)
        )
        e_off += pn * (
            (q + gamma * p) * (n + 1)
            + (1 - gamma) * p * (p_low * (n + left_low) + (1 - p_low) * (n + 1 + right_high))
        )
    return e_dur, e_rev, e_off


@pytest.fixture(scope="session")
def series_oracle():
    return series_cycle_expectations


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
