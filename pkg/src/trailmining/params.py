"""Network parameters, strategy identifiers and shared notation helpers.

Every rational expression in ``lambda = q/p`` that appears in the closed forms
is funnelled through :func:`bracket` or :func:`pa_eval`, both of which are
polynomial evaluations and stay well conditioned as ``lambda -> 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (
    DomainError,
    GammaOutOfRange,
    InternalInconsistency,
    NonPositiveScale,
    QOutOfRange,
)

__all__ = [
    "NetworkParams",
    "StrategyId",
    "HONEST",
    "SELFISH",
    "LEAD_STUBBORN",
    "validate_params",
    "bracket",
    "pa_coefficients",
    "pa_eval",
    "catalan",
    "cycle_length_pmf",
]

# C_30 = 3814986502092304 still fits comfortably in 64 bits
_EXACT_CATALAN_MAX = 30


@dataclass(frozen=True)
class NetworkParams:
    """Attacker hashrate ``q``, connectivity ``gamma``, block time ``tau0``, reward ``b``."""

    q: float
    gamma: float
    tau0: float = 1.0
    b: float = 1.0

    def __post_init__(self):
        q, gamma, tau0, b = (float(v) for v in (self.q, self.gamma, self.tau0, self.b))
        if not (0.0 <= q < 0.5):
            raise QOutOfRange(f"q must satisfy 0 <= q < 1/2, got {q!r}")
        if not (0.0 <= gamma <= 1.0):
            raise GammaOutOfRange(f"gamma must lie in [0, 1], got {gamma!r}")
        if not (tau0 > 0.0):
            raise NonPositiveScale(f"tau0 must be > 0, got {tau0!r}")
        if not (b > 0.0):
            raise NonPositiveScale(f"b must be > 0, got {b!r}")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "tau0", tau0)
        object.__setattr__(self, "b", b)

    @property
    def p(self) -> float:
        return 1.0 - self.q

    @property
    def lam(self) -> float:
        """``lambda = q / p``, always in ``[0, 1)``."""
        return self.q / self.p


def validate_params(q, gamma, tau0=1.0, b=1.0) -> NetworkParams:
    return NetworkParams(q, gamma, tau0, b)


_KIND_ORDER = {"honest": 0, "sm": 1, "tsm": 2}


@dataclass(frozen=True)
class StrategyId:
    """One of Honest, Selfish Mining, or A-Trail-Stubborn (LSM is ``tsm`` with ``a=1``)."""

    kind: str
    a: int | None = None

    def __post_init__(self):
        if self.kind not in _KIND_ORDER:
            raise DomainError(f"unknown strategy kind {self.kind!r}")
        if self.kind == "tsm":
            if self.a is None or int(self.a) != self.a or self.a < 1:
                raise DomainError(f"trail-stubborn threshold must be an integer >= 1, got {self.a!r}")
            object.__setattr__(self, "a", int(self.a))
        elif self.a is not None:
            raise DomainError(f"strategy {self.kind!r} takes no threshold")

    @classmethod
    def trail_stubborn(cls, a: int) -> StrategyId:
        return cls("tsm", a)

    @classmethod
    def parse(cls, text: str) -> StrategyId:
        """Parse ``honest``, ``sm``, ``lsm``, ``tsm:3`` (also ``tsm3``)."""
        t = text.strip().lower()
        if t in ("honest", "hm"):
            return HONEST
        if t in ("sm", "selfish"):
            return SELFISH
        if t == "lsm":
            return LEAD_STUBBORN
        if t.startswith("tsm"):
            rest = t[3:].lstrip(":")
            try:
                return cls.trail_stubborn(int(rest))
            except ValueError:
                raise DomainError(f"cannot parse strategy {text!r}") from None
        raise DomainError(f"cannot parse strategy {text!r}")

    @property
    def sort_key(self) -> tuple[int, int]:
        return (_KIND_ORDER[self.kind], self.a or 0)

    @property
    def label(self) -> str:
        if self.kind == "tsm":
            return "lsm" if self.a == 1 else f"tsm{self.a}"
        return self.kind

    def __str__(self):
        return self.label


HONEST = StrategyId("honest")
SELFISH = StrategyId("sm")
LEAD_STUBBORN = StrategyId("tsm", 1)


def bracket(n: int, lam):
    """``[n] = 1 + lam + ... + lam**(n-1)``; ``[0] = 0``. Broadcasts over arrays."""
    if n < 0:
        raise DomainError(f"bracket index must be >= 0, got {n}")
    if isinstance(lam, np.ndarray):
        acc = np.zeros_like(lam, dtype=float)
    else:
        # plain scalars keep their type, so Fractions stay exact
        acc = 0 * lam
    for _ in range(n):
        acc = acc * lam + 1
    return acc


def _divide_by_one_minus_x(coeffs: list[int]) -> list[int]:
    # (1 - X) * sum c_k X^k has coefficients c_k - c_{k-1}, so the quotient is
    # the running sum and the remainder is the total sum.
    out, running = [], 0
    for c in coeffs[:-1]:
        running += c
        out.append(running)
    if running + coeffs[-1] != 0:
        raise InternalInconsistency("nonzero remainder dividing by (1 - X)")
    return out or [0]


def divide_by_one_minus_x_cubed(terms: dict[int, int]) -> tuple[int, ...]:
    """Exact quotient of ``sum terms[k] X^k`` by ``(1 - X)^3`` over the integers.

    Raises :class:`InternalInconsistency` if the division leaves a remainder.
    """
    degree = max(terms)
    coeffs = [0] * (degree + 1)
    for k, c in terms.items():
        coeffs[k] += c
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    if coeffs == [0]:
        return (0,)
    for _ in range(3):
        if len(coeffs) < 2:
            raise InternalInconsistency("polynomial degree too small for a triple root at 1")
        coeffs = _divide_by_one_minus_x(coeffs)
    return tuple(coeffs)


def polyval_ascending(coeffs, x):
    """Horner evaluation of ``sum coeffs[k] x**k``; broadcasts over arrays."""
    acc = np.zeros_like(x, dtype=float) if isinstance(x, np.ndarray) else 0.0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


@lru_cache(maxsize=None)
def pa_coefficients(a: int) -> tuple[int, ...]:
    """Integer coefficients (ascending powers) of ``P_A``.

    ``P_A(X) = (1 - A X^(A-1) + A X^(A+1) - X^(2A)) / (1 - X)^3``, divided
    exactly over the integers. ``P_1`` is the zero polynomial ``(0,)``.
    """
    if int(a) != a or a < 1:
        raise DomainError(f"A must be an integer >= 1, got {a!r}")
    a = int(a)
    terms: dict[int, int] = {}
    for k, c in ((0, 1), (a - 1, -a), (a + 1, a), (2 * a, -1)):
        terms[k] = terms.get(k, 0) + c
    return divide_by_one_minus_x_cubed(terms)


def pa_eval(a: int, lam):
    """Evaluate ``P_A(lam)`` from its integer coefficients."""
    return polyval_ascending(pa_coefficients(a), lam)


def catalan(n: int) -> float:
    """n-th Catalan number; exact below ``n = 31``, log-gamma beyond."""
    if n < 0:
        raise DomainError(f"Catalan index must be >= 0, got {n}")
    if n <= _EXACT_CATALAN_MAX:
        return float(math.comb(2 * n, n) // (n + 1))
    return math.exp(math.lgamma(2 * n + 1) - 2 * math.lgamma(n + 1) - math.log(n + 1))


def cycle_length_pmf(n: int, params: NetworkParams) -> float:
    """P[N'(tau) = n]: number of attacker blocks before the honest chain catches up."""
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    p, q = params.p, params.q
    if n == 0:
        return p
    if q == 0.0:
        return 0.0
    if n - 1 <= _EXACT_CATALAN_MAX:
        return catalan(n - 1) * (p * q) ** n
    k = n - 1
    log_c = math.lgamma(2 * k + 1) - 2 * math.lgamma(k + 1) - math.log(k + 1)
    return math.exp(log_c + n * math.log(p * q))
