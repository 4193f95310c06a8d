"""Biased random walk on ``[0, M]`` with absorbing ends (the "hiker").

A step goes right with probability ``p_right`` and left with ``q_left``;
``lam = q_left / p_right < 1``.  "Low" is absorption at 0, "high" at ``M``.

Closed forms are evaluated with their removable singularity at ``lam = 1``
divided out exactly, so they stay accurate for ``p_right`` close to 1/2.
:func:`absorption_oracle` solves the same quantities as tridiagonal linear
systems and never touches a closed form.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import solve_banded

from . import _kernels
from .errors import DegenerateConditioning, InvalidHikerProblem, SingularSystem, StepCapExceeded
from .params import bracket, divide_by_one_minus_x_cubed, polyval_ascending

__all__ = [
    "HikerProblem",
    "HikerClosedForms",
    "PathSample",
    "exit_prob_low",
    "expected_exit_time",
    "stern_conditional_time",
    "expected_exit_time_given_high",
    "expected_left_steps_given_ruin",
    "expected_right_steps_given_win",
    "left_steps_given_ruin_m2",
    "twisted_transitions",
    "u_sequence",
    "u_closed",
    "u_partial_sum",
    "closed_forms",
    "absorption_oracle",
    "sample_hiker_path",
    "sample_hiker_paths",
]

ORACLE_MAX_M = 10_000
STEP_CAP = 10**9


@dataclass(frozen=True)
class HikerProblem:
    M: int
    m: int
    p_right: float

    def __post_init__(self):
        if int(self.M) != self.M or self.M < 2:
            raise InvalidHikerProblem(f"M must be an integer >= 2, got {self.M!r}")
        if int(self.m) != self.m or not (0 <= self.m <= self.M):
            raise InvalidHikerProblem(f"m must be an integer in [0, {self.M}], got {self.m!r}")
        if not (0.5 < self.p_right < 1.0):
            raise InvalidHikerProblem(f"p_right must lie in (1/2, 1), got {self.p_right!r}")
        object.__setattr__(self, "M", int(self.M))
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "p_right", float(self.p_right))

    @property
    def q_left(self) -> float:
        return 1.0 - self.p_right

    @property
    def lam(self) -> float:
        return self.q_left / self.p_right


@dataclass(frozen=True)
class HikerClosedForms:
    """Exit statistics of one problem. Conditional fields are ``None`` when undefined."""

    exit_prob_low: float
    e_exit_time: float
    e_exit_time_given_low: float | None
    e_exit_time_given_high: float | None
    e_left_given_low: float | None
    e_right_given_high: float | None


@dataclass(frozen=True)
class PathSample:
    exit_low: bool
    total_steps: int
    left_steps: int
    right_steps: int


def exit_prob_low(problem: HikerProblem) -> float:
    """P[absorbed at 0] = ``(lam^m - lam^M) / (1 - lam^M)``."""
    m, M, lam = problem.m, problem.M, problem.lam
    return lam**m * bracket(M - m, lam) / bracket(M, lam)


@lru_cache(maxsize=None)
def _exit_time_coefficients(m: int, M: int) -> tuple[int, ...]:
    # M [m] - m [M] has a simple root at lam = 1; these are the quotient's coefficients.
    return tuple((k + 1) * (M - m) if k < m else m * (M - 1 - k) for k in range(M - 1))


def expected_exit_time(problem: HikerProblem) -> float:
    """E[nu_m] in steps: ``M/(p-q) * ((1-lam^m)/(1-lam^M) - m/M)``."""
    m, M, lam = problem.m, problem.M, problem.lam
    if m in (0, M):
        return 0.0
    num = polyval_ascending(_exit_time_coefficients(m, M), lam)
    return num / (problem.p_right * bracket(M, lam))


@lru_cache(maxsize=None)
def _stern_coefficients(m: int, M: int) -> tuple[int, ...]:
    # numerator divided by lam^m; triple root at lam = 1
    return divide_by_one_minus_x_cubed({0: m, M - m: -(2 * M - m), M: 2 * M - m, 2 * M - m: -m})


def _stern(m: int, M: int, p: float, lam: float) -> float:
    return polyval_ascending(_stern_coefficients(m, M), lam) / (
        p * bracket(M - m, lam) * bracket(M, lam)
    )


def _require_interior(problem: HikerProblem):
    if not (1 <= problem.m <= problem.M - 1):
        raise DegenerateConditioning(
            f"conditioning on the exit side needs 1 <= m <= M-1, got m={problem.m}, M={problem.M}"
        )


def stern_conditional_time(problem: HikerProblem) -> float:
    """E[nu_m | absorbed at 0] (Stern's formula)."""
    _require_interior(problem)
    return _stern(problem.m, problem.M, problem.p_right, problem.lam)


def expected_exit_time_given_high(problem: HikerProblem) -> float:
    """E[nu_m | absorbed at M].

    Conditioned on the exit side, a path's weight only depends on its length,
    so reflecting ``i -> M - i`` maps this onto Stern's formula started at ``M - m``.
    """
    _require_interior(problem)
    return _stern(problem.M - problem.m, problem.M, problem.p_right, problem.lam)


def expected_left_steps_given_ruin(problem: HikerProblem) -> float:
    """E[left steps | absorbed at 0] = ``m/2 + E[nu_m | low]/2``."""
    return problem.m / 2 + stern_conditional_time(problem) / 2


def expected_right_steps_given_win(problem: HikerProblem) -> float:
    """E[right steps | absorbed at M] = ``(M-m)/2 + E[nu_m | high]/2``."""
    return (problem.M - problem.m) / 2 + expected_exit_time_given_high(problem) / 2


def left_steps_given_ruin_m2(M: int, p_right: float) -> float:
    """Specialisation of :func:`expected_left_steps_given_ruin` to ``m = 2`` (needs ``M >= 3``).

    Written in the ``1 + (1/p) * (...)`` form used by the trail-phase revenue.
    """
    lam = (1.0 - p_right) / p_right
    num = 1 - (M - 1) * lam ** (M - 2) + (M - 1) * lam**M - lam ** (2 * M - 2)
    return 1 + num / (p_right * (1 - lam) * (1 - lam ** (M - 2)) * (1 - lam**M))


def twisted_transitions(i: int, problem: HikerProblem) -> tuple[float, float]:
    """Transition probabilities ``(up, down)`` of the walk conditioned to exit at 0."""
    M = problem.M
    if not (1 <= i <= M - 1):
        raise DegenerateConditioning(f"twisted kernel is defined on 1..M-1, got i={i}")
    lam = problem.lam
    k = M - i
    denom = bracket(k, lam)
    up = problem.q_left * bracket(k - 1, lam) / denom
    down = problem.p_right * bracket(k + 1, lam) / denom
    return up, down


def u_sequence(n: int, lam):
    """Auxiliary sequence ``u_n`` by its defining recursion.

    Works with floats or :class:`fractions.Fraction` (exact) inputs.
    """
    p = 1 / (1 + lam)
    u = 1 + 0 * lam
    for k in range(1, n + 1):
        u = lam * (1 - lam**k) / (1 - lam ** (k + 2)) * u + (1 / p) * (1 - lam ** (k + 1)) / (
            1 - lam ** (k + 2)
        )
    return u


@lru_cache(maxsize=None)
def _u_coefficients(n: int) -> tuple[int, ...]:
    c = 2 * n + 3
    return divide_by_one_minus_x_cubed({0: 1, n + 1: -c, n + 2: c, 2 * n + 3: -1})


def u_closed(n: int, lam: float) -> float:
    """Closed form of ``u_n``."""
    p = 1.0 / (1.0 + lam)
    return polyval_ascending(_u_coefficients(n), lam) / (
        p * bracket(n + 1, lam) * bracket(n + 2, lam)
    )


def u_partial_sum(m: int, M: int, lam: float) -> float:
    """Literal ``sum(u_i for i in M-1-m .. M-2)``; equals Stern's formula."""
    return sum(u_closed(i, lam) for i in range(M - 1 - m, M - 1))


def closed_forms(problem: HikerProblem) -> HikerClosedForms:
    interior = 1 <= problem.m <= problem.M - 1
    return HikerClosedForms(
        exit_prob_low=exit_prob_low(problem),
        e_exit_time=expected_exit_time(problem),
        e_exit_time_given_low=stern_conditional_time(problem) if interior else None,
        e_exit_time_given_high=expected_exit_time_given_high(problem) if interior else None,
        e_left_given_low=expected_left_steps_given_ruin(problem) if interior else None,
        e_right_given_high=expected_right_steps_given_win(problem) if interior else None,
    )


def _solve_interior(down, up, rhs, left_bc=0.0, right_bc=0.0):
    """Solve ``x_i = rhs_i + down_i x_{i-1} + up_i x_{i+1}`` on the interior 1..M-1."""
    n = len(rhs)
    b = np.array(rhs, dtype=float)
    b[0] += down[0] * left_bc
    b[-1] += up[-1] * right_bc
    ab = np.zeros((3, n))
    ab[0, 1:] = -up[:-1]
    ab[1, :] = 1.0
    ab[2, :-1] = -down[1:]
    try:
        x = solve_banded((1, 1), ab, b)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(str(exc)) from exc
    if not np.all(np.isfinite(x)):
        raise SingularSystem("non-finite solution")
    return np.concatenate(([left_bc], x, [right_bc]))


def absorption_oracle(problem: HikerProblem, conditioned_on_low: bool = True) -> HikerClosedForms:
    """Brute-force counterpart of :func:`closed_forms` by tridiagonal linear solves.

    Exit probabilities and times come from the plain kernel.  With
    ``conditioned_on_low`` the low-conditioned time is solved on the twisted
    kernel, and the high-conditioned time from ``E[nu 1_high]`` divided by
    ``P[high]``; otherwise the conditional fields are left as ``None``.
    """
    M, m = problem.M, problem.m
    if M > ORACLE_MAX_M:
        raise InvalidHikerProblem(f"oracle supports M <= {ORACLE_MAX_M}, got {M}")
    p, q = problem.p_right, problem.q_left
    n = M - 1
    up = np.full(n, p)
    down = np.full(n, q)

    h_low = _solve_interior(down, up, np.zeros(n), left_bc=1.0, right_bc=0.0)
    times = _solve_interior(down, up, np.ones(n))
    interior = 1 <= m <= M - 1
    if not (conditioned_on_low and interior):
        return HikerClosedForms(h_low[m], times[m], None, None, None, None)

    # twisted kernel built directly from the solved exit probabilities
    tw_up = p * h_low[2:] / h_low[1:-1]
    tw_down = q * h_low[:-2] / h_low[1:-1]
    v_low = _solve_interior(tw_down, tw_up, np.ones(n))

    h_high = 1.0 - h_low
    joint_high = _solve_interior(down, up, h_high[1:-1])
    t_low = v_low[m]
    t_high = joint_high[m] / h_high[m]
    return HikerClosedForms(
        exit_prob_low=h_low[m],
        e_exit_time=times[m],
        e_exit_time_given_low=t_low,
        e_exit_time_given_high=t_high,
        e_left_given_low=m / 2 + t_low / 2,
        e_right_given_high=(M - m) / 2 + t_high / 2,
    )


def sample_hiker_path(problem: HikerProblem, rng: np.random.Generator) -> PathSample:
    """Walk one path to absorption."""
    exit_low, left, right = _kernels.hiker_path(problem.m, problem.M, problem.p_right, rng, STEP_CAP)
    if exit_low < 0:
        raise StepCapExceeded(f"no absorption after {STEP_CAP} steps")
    return PathSample(bool(exit_low), left + right, left, right)


def sample_hiker_paths(problem: HikerProblem, n_paths: int, rng: np.random.Generator):
    """Vector form of :func:`sample_hiker_path`: arrays ``(exit_low, left, right)``."""
    exit_low, left, right = _kernels.hiker_paths(problem.m, problem.M, problem.p_right, n_paths, rng, STEP_CAP)
    if np.any(exit_low < 0):
        raise StepCapExceeded(f"no absorption after {STEP_CAP} steps")
    return exit_low.astype(bool), left, right
