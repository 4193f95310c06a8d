"""Trail-stubborn mining: closed forms, Monte Carlo and dominance sweeps."""

from .analytic import AnalyticMetrics, analytic_metrics
from .errors import (
    BackendMismatch,
    DomainError,
    InternalInconsistency,
    StepCapExceeded,
    TrailMiningError,
)
from .hiker import HikerProblem, absorption_oracle, closed_forms
from .mixed import StrategySummary, compose, no_advantage_check
from .params import HONEST, LEAD_STUBBORN, SELFISH, NetworkParams, StrategyId
from .simulator import Estimate, EstimateSummary, estimate_metrics, simulate_pattern
from .sweep import GridSpec

__version__ = "0.1.0"

__all__ = [
    "AnalyticMetrics",
    "BackendMismatch",
    "DomainError",
    "Estimate",
    "EstimateSummary",
    "GridSpec",
    "HONEST",
    "HikerProblem",
    "InternalInconsistency",
    "LEAD_STUBBORN",
    "NetworkParams",
    "SELFISH",
    "StepCapExceeded",
    "StrategyId",
    "StrategySummary",
    "TrailMiningError",
    "absorption_oracle",
    "analytic_metrics",
    "closed_forms",
    "compose",
    "estimate_metrics",
    "no_advantage_check",
    "simulate_pattern",
]
