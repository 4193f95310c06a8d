"""Mixed strategies: a fixed pattern of attack cycles drawn from several strategies.

Each component is reduced to ``(D, Gamma~)``: its difficulty adjustment and
its long-term revenue rate after adjustment (``b / tau0`` units).  The
pattern's own ``(D, Gamma~)`` is the barycenter of the components weighted
by ``mu = E[duration] / D``, the expected number of official blocks per
cycle.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import analytic
from .errors import BackendMismatch, EmptyPattern, NonPositiveInput
from .params import NetworkParams, StrategyId
from .simulator import EstimateSummary

__all__ = [
    "StrategySummary",
    "NoAdvantageReport",
    "weight",
    "analytic_summary",
    "summary_from_estimate",
    "compose",
    "no_advantage_check",
]

TOL = 1e-12


def weight(e_duration: float, d: float) -> float:
    """Expected official blocks per cycle, ``e_duration / d`` (``e_duration`` in ``tau0`` units)."""
    if not (e_duration > 0 and d > 0):
        raise NonPositiveInput(f"weight needs e_duration > 0 and d > 0, got {e_duration!r}, {d!r}")
    return e_duration / d


@dataclass(frozen=True)
class StrategySummary:
    d: float
    gamma_tilde: float
    e_duration: float
    label: str = ""

    def __post_init__(self):
        if not (self.d > 0 and self.e_duration > 0):
            raise NonPositiveInput(f"{self.label or 'summary'}: d and e_duration must be > 0")

    @property
    def mu(self) -> float:
        return weight(self.e_duration, self.d)

    def apparent_hashrate(self, tau0: float = 1.0, b: float = 1.0) -> float:
        return self.gamma_tilde * tau0 / b


def analytic_summary(strategy: StrategyId, params: NetworkParams) -> StrategySummary:
    """Closed-form summary; selfish mining has none in scope, use :func:`summary_from_estimate`."""
    scale = params.b / params.tau0
    if strategy.kind == "honest":
        return StrategySummary(1.0, params.q * scale, 1.0, strategy.label)
    if strategy.kind == "sm":
        raise BackendMismatch("no closed-form cycle duration for selfish mining; simulate it instead")
    m = analytic.analytic_metrics(params, strategy.a)
    return StrategySummary(m.delta, m.apparent_hashrate * scale, m.e_duration, strategy.label)


def summary_from_estimate(est: EstimateSummary) -> StrategySummary:
    scale = est.params.b / est.params.tau0
    return StrategySummary(
        d=est.delta.mean,
        gamma_tilde=est.apparent_hashrate.mean * scale,
        e_duration=est.e_duration.mean / est.params.tau0,
        label=est.label,
    )


def compose(pattern: list[StrategySummary]) -> StrategySummary:
    """Summary of one full pattern; ``d`` and ``gamma_tilde`` are ``mu``-weighted means."""
    if not pattern:
        raise EmptyPattern("a mixed strategy needs at least one component")
    if len(pattern) == 1:
        return pattern[0]
    mus = [s.mu for s in pattern]
    mu = sum(mus)
    d = sum(w * s.d for w, s in zip(mus, pattern)) / mu
    g = sum(w * s.gamma_tilde for w, s in zip(mus, pattern)) / mu
    return StrategySummary(
        d=d,
        gamma_tilde=g,
        e_duration=sum(s.e_duration for s in pattern),
        label="+".join(s.label for s in pattern),
    )


@dataclass(frozen=True)
class NoAdvantageReport:
    composed: float
    best_component: float
    bounded: bool
    equality: bool
    components_equal: bool

    @property
    def passed(self) -> bool:
        return self.bounded and self.equality == self.components_equal


def no_advantage_check(pattern: list[StrategySummary]) -> NoAdvantageReport:
    """Check that mixing cannot beat the best pure component.

    Equality is expected exactly when every component (all have positive
    weight) attains the best ``gamma_tilde``.
    """
    composed = compose(pattern).gamma_tilde
    best = max(s.gamma_tilde for s in pattern)
    return NoAdvantageReport(
        composed=composed,
        best_component=best,
        bounded=composed <= best + TOL,
        equality=abs(composed - best) <= TOL,
        components_equal=all(abs(s.gamma_tilde - best) <= TOL for s in pattern),
    )
