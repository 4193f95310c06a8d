from fractions import Fraction

import numpy as np
import pytest
from numpy.testing import assert_allclose

from trailmining import hiker
from trailmining.errors import InvalidHikerProblem
from trailmining.hiker import HikerProblem


def test_problem_validation():
    for args in [(1, 0, 0.6), (4, 5, 0.6), (4, -1, 0.6), (4, 2, 0.5), (4, 2, 1.0)]:
        with pytest.raises(InvalidHikerProblem):
            HikerProblem(*args)


def test_boundaries():
    assert hiker.exit_prob_low(HikerProblem(4, 0, 0.6)) == 1
    assert hiker.exit_prob_low(HikerProblem(4, 4, 0.6)) == 0
    assert hiker.expected_exit_time(HikerProblem(4, 0, 0.6)) == 0
    assert hiker.expected_exit_time(HikerProblem(4, 4, 0.6)) == 0


def test_worked_values():
    prob = HikerProblem(4, 2, 0.6)
    assert_allclose(hiker.exit_prob_low(prob), 4 / 13, rtol=1e-14)
    assert_allclose(hiker.expected_exit_time(prob), 50 / 13, rtol=1e-14)
    assert_allclose(hiker.stern_conditional_time(prob), 50 / 13, rtol=1e-14)
    assert_allclose(hiker.expected_left_steps_given_ruin(prob), 38 / 13, rtol=1e-14)
    assert_allclose(hiker.expected_exit_time(HikerProblem(3, 2, 0.6)), 35 / 19, rtol=1e-14)
    assert_allclose(hiker.stern_conditional_time(HikerProblem(2, 1, 0.7)), 1.0, rtol=1e-14)
    assert_allclose(hiker.expected_left_steps_given_ruin(HikerProblem(2, 1, 0.7)), 1.0, rtol=1e-14)


def test_stern_large_M_limit():
    assert abs(hiker.stern_conditional_time(HikerProblem(1000, 2, 0.6)) - 10) < 1e-6


def test_elnu20_form_matches_general():
    for M in range(3, 12):
        for p in (0.55, 0.7, 0.9):
            assert_allclose(
                hiker.left_steps_given_ruin_m2(M, p),
                hiker.expected_left_steps_given_ruin(HikerProblem(M, 2, p)),
                rtol=1e-12,
            )


@pytest.mark.parametrize("M", [2, 3, 5, 8])
@pytest.mark.parametrize("p", [Fraction(11, 20), Fraction(3, 5), Fraction(9, 10)])
def test_closed_forms_against_exact_rational_oracle(M, p, exact_hiker_oracle):
    for m in range(1, M):
        exact = exact_hiker_oracle(m, M, p)
        got = hiker.closed_forms(HikerProblem(M, m, float(p)))
        fields = (
            got.exit_prob_low,
            got.e_exit_time,
            got.e_exit_time_given_low,
            got.e_exit_time_given_high,
            got.e_left_given_low,
            got.e_right_given_high,
        )
        for g, e in zip(fields, exact):
            assert_allclose(g, float(e), rtol=1e-12)


def test_right_steps_given_win_corrected_form(exact_hiker_oracle):
    # conditioned on the high exit, E[right] = (M-m)/2 + E[nu|high]/2
    exact = exact_hiker_oracle(2, 5, Fraction(3, 5))
    assert_allclose(hiker.expected_right_steps_given_win(HikerProblem(5, 2, 0.6)), float(exact[5]), rtol=1e-13)


def test_oracle_agrees_with_exact(exact_hiker_oracle):
    for M, m in [(4, 2), (7, 3), (10, 1)]:
        oracle = hiker.absorption_oracle(HikerProblem(M, m, 0.65))
        exact = exact_hiker_oracle(m, M, Fraction(13, 20))
        assert_allclose(oracle.exit_prob_low, float(exact[0]), rtol=1e-12)
        assert_allclose(oracle.e_exit_time_given_low, float(exact[2]), rtol=1e-12)
        assert_allclose(oracle.e_right_given_high, float(exact[5]), rtol=1e-12)


def test_twisted_transitions():
    prob = HikerProblem(3, 1, 0.6)
    up, down = hiker.twisted_transitions(1, prob)
    assert_allclose(down, 0.76, rtol=1e-14)
    assert_allclose(up + down, 1.0, atol=1e-14)
    for M in (3, 6, 10):
        prob = HikerProblem(M, 1, 0.7)
        up, down = hiker.twisted_transitions(M - 1, prob)
        assert down == pytest.approx(1.0, abs=1e-15)
        for i in range(1, M):
            up, down = hiker.twisted_transitions(i, prob)
            assert abs(up + down - 1) < 1e-14


def test_twisted_transitions_match_path_enumeration():
    # conditioned step probabilities from brute-force enumeration of paths to depth 20
    p, q, M, i = Fraction(3, 5), Fraction(2, 5), 3, 1

    def ruin_mass(x, depth):
        if x == 0:
            return Fraction(1)
        if x == M or depth == 0:
            return Fraction(0)
        return p * ruin_mass(x + 1, depth - 1) + q * ruin_mass(x - 1, depth - 1)

    total = ruin_mass(i, 20)
    down = q * ruin_mass(i - 1, 19) / total
    assert abs(float(down) - hiker.twisted_transitions(i, HikerProblem(M, i, 0.6))[1]) < 1e-4


def test_u_sequence():
    lam = Fraction(3, 7)
    p = 1 / (1 + lam)
    q = 1 - p
    u = [hiker.u_sequence(n, lam) for n in range(3)]
    assert u[0] == 1
    assert (u[0] + u[1]) / 2 == 1 / (1 - p * q)
    assert (u[1] + u[2]) / 2 == 1 / (1 - 2 * p * q)
    assert abs(hiker.u_sequence(200, 0.5) - 3.0) < 1e-10
    for n in range(0, 60, 7):
        assert_allclose(hiker.u_closed(n, 0.6), float(hiker.u_sequence(n, Fraction(3, 5))), rtol=1e-12)


def test_sampled_paths():
    rng = np.random.default_rng(7)
    prob = HikerProblem(4, 2, 0.6)
    exit_low, left, right = hiker.sample_hiker_paths(prob, 200_000, rng)
    low = exit_low.astype(float)
    se = low.std(ddof=1) / np.sqrt(low.size)
    assert abs(low.mean() - 4 / 13) < 4 * se
    steps = left + right
    assert abs(steps.mean() - 50 / 13) < 4 * steps.std(ddof=1) / np.sqrt(steps.size)
    # path geometry: right - left is M - m on a high exit and -m on a low exit
    d = right - left
    assert np.all(np.where(low == 1, d == -2, d == 2))


def test_sample_path_boundaries():
    rng = np.random.default_rng(0)
    s = hiker.sample_hiker_path(HikerProblem(4, 0, 0.6), rng)
    assert (s.exit_low, s.left_steps, s.right_steps) == (True, 0, 0)
    s = hiker.sample_hiker_path(HikerProblem(4, 4, 0.6), rng)
    assert (s.exit_low, s.left_steps, s.right_steps) == (False, 0, 0)
