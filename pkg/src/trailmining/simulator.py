"""Monte Carlo estimation of attack-cycle statistics.

Cycles are simulated in fixed-size chunks.  Chunk ``k`` draws from its own
Philox stream keyed by ``(master_seed, k)``, chunks are farmed out to a
thread pool, and their partial sums are added back in chunk order, so a
summary depends only on ``(strategy, params, n_cycles, master_seed)`` and
never on the number of workers.

Ratio metrics (``Gamma``, ``delta``, ``q~``) are ratios of totals over all
cycles, never averages of per-cycle ratios; their standard errors use the
delta method.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .errors import DomainError, EventCapExceeded
from .hiker import HikerProblem, exit_prob_low, expected_exit_time
from .params import NetworkParams, StrategyId

__all__ = [
    "CycleOutcome",
    "Estimate",
    "EstimateSummary",
    "EmbeddingReport",
    "EVENT_CAP",
    "CHUNK_SIZE",
    "cycle_stream",
    "run_cycle",
    "run_cycle_tsm",
    "run_cycle_sm",
    "run_cycle_honest",
    "estimate_metrics",
    "simulate_pattern",
    "poisson_embedding_check",
]

EVENT_CAP = 10**7
CHUNK_SIZE = 1 << 16


@dataclass(frozen=True)
class CycleOutcome:
    duration: float
    revenue_blocks: int
    official_height: int
    sigma_occurred: bool
    n_prime_tau: int
    z_tau: int
    second_phase_steps: tuple[int, int]
    second_phase_duration: float

    @property
    def trail_won(self) -> bool:
        left, right = self.second_phase_steps
        return self.sigma_occurred and left - right == 2


@dataclass(frozen=True)
class Estimate:
    mean: float
    std_error: float
    n: int

    def within(self, value: float, k: float = 4.0) -> bool:
        return abs(self.mean - value) <= k * self.std_error

    def as_dict(self):
        return {"mean": self.mean, "std_error": self.std_error, "n": self.n}


@dataclass(frozen=True)
class EstimateSummary:
    """Monte Carlo counterpart of :class:`~trailmining.analytic.AnalyticMetrics`.

    For a mixed pattern every metric is per pattern repetition (``n_units``
    repetitions); per-cycle metrics (``p_sigma``, ``e_n_prime``, the Z table)
    are always per cycle.
    """

    label: str
    params: NetworkParams
    n_units: int
    n_cycles: int
    master_seed: int
    revenue_ratio: Estimate
    delta: Estimate
    apparent_hashrate: Estimate
    e_duration: Estimate
    e_revenue: Estimate
    e_official: Estimate
    p_sigma: Estimate
    e_n_prime: Estimate
    e_sigma_duration: Estimate
    p_trail_win: Estimate
    step_identity_violations: int
    z_table: dict[int, Estimate] = field(default_factory=dict)

    def as_dict(self):
        out = {
            "strategy": self.label,
            "q": self.params.q,
            "gamma": self.params.gamma,
            "tau0": self.params.tau0,
            "b": self.params.b,
            "n_units": self.n_units,
            "n_cycles": self.n_cycles,
            "master_seed": self.master_seed,
        }
        for name in (
            "revenue_ratio",
            "delta",
            "apparent_hashrate",
            "e_duration",
            "e_revenue",
            "e_official",
            "p_sigma",
            "e_n_prime",
            "e_sigma_duration",
            "p_trail_win",
        ):
            out[name] = getattr(self, name).as_dict()
        out["step_identity_violations"] = self.step_identity_violations
        out["z_table"] = {str(n): e.as_dict() for n, e in sorted(self.z_table.items())}
        return out


def cycle_stream(master_seed: int, index: int) -> np.random.Generator:
    """Independent reproducible stream number ``index`` under ``master_seed``."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(master_seed, spawn_key=(index,))))


def _kind(strategy: StrategyId) -> tuple[int, int]:
    if strategy.kind == "tsm":
        return K.TRAIL, strategy.a
    if strategy.kind == "sm":
        return K.SELFISH, 0
    return K.HONEST, 0


def _outcome(result, tau0: float) -> CycleOutcome:
    status, dur, rev, height, sigma, n_prime, z, left, right, sig_dur = result
    if status != K.OK:
        raise EventCapExceeded(f"cycle exceeded {EVENT_CAP} events")
    return CycleOutcome(
        duration=dur * tau0,
        revenue_blocks=int(rev),
        official_height=int(height),
        sigma_occurred=bool(sigma),
        n_prime_tau=int(n_prime),
        z_tau=int(z),
        second_phase_steps=(int(left), int(right)),
        second_phase_duration=sig_dur * tau0,
    )


def run_cycle(strategy: StrategyId, params: NetworkParams, rng: np.random.Generator) -> CycleOutcome:
    kind, a = _kind(strategy)
    return _outcome(K.run_cycle(kind, a, params.q, params.gamma, rng, EVENT_CAP), params.tau0)


def run_cycle_tsm(params: NetworkParams, a: int, rng: np.random.Generator) -> CycleOutcome:
    """One A-trail-stubborn attack cycle (``a = 1`` is lead-stubborn mining)."""
    return run_cycle(StrategyId.trail_stubborn(a), params, rng)


def run_cycle_sm(params: NetworkParams, rng: np.random.Generator) -> CycleOutcome:
    """One selfish-mining cycle.

    The attacker withholds his blocks.  A lead of one that gets matched goes
    to a decisive competition (attacker ``q``, honest-on-attacker ``gamma p``,
    honest-on-honest ``(1-gamma) p``).  A lead of two or more is kept until
    honest blocks shrink it to one, at which point the whole secret chain is
    published and wins.  There is no trail phase.
    """
    return run_cycle(StrategyId("sm"), params, rng)


def run_cycle_honest(params: NetworkParams, rng: np.random.Generator) -> CycleOutcome:
    return run_cycle(StrategyId("honest"), params, rng)


def _mean_estimate(s, ss, n) -> Estimate:
    if n == 0:
        return Estimate(math.nan, math.nan, 0)
    mean = float(s / n)
    if n < 2:
        return Estimate(float(mean), math.nan, n)
    var = max(ss - s * s / n, 0.0) / (n - 1)
    return Estimate(float(mean), float(math.sqrt(var / n)), n)


def _ratio_estimate(sx, sy, sxx, syy, sxy, n) -> Estimate:
    r = float(sx / sy)
    if n < 2:
        return Estimate(r, math.nan, n)
    # residual x - r*y sums to zero, so its sample variance is its mean square
    resid = max(sxx - 2 * r * sxy + r * r * syy, 0.0) / (n - 1)
    return Estimate(r, float(math.sqrt(resid / n) / (sy / n)), n)


def _run_chunks(kinds, a_values, params, n_units, master_seed, threads):
    n_chunks = -(-n_units // CHUNK_SIZE)

    def work(k):
        size = min(CHUNK_SIZE, n_units - k * CHUNK_SIZE)
        return K.run_units(kinds, a_values, params.q, params.gamma, size, cycle_stream(master_seed, k), EVENT_CAP)

    if threads > 1 and n_chunks > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, range(n_chunks)))
    else:
        parts = [work(k) for k in range(n_chunks)]

    acc = np.zeros(K.ACC_SIZE)
    z_count = np.zeros(K.Z_TABLE_SIZE, dtype=np.int64)
    z_sum = np.zeros(K.Z_TABLE_SIZE)
    z_sumsq = np.zeros(K.Z_TABLE_SIZE)
    for status, a, zc, zs, zss in parts:
        if status != K.OK:
            raise EventCapExceeded(f"a cycle exceeded {EVENT_CAP} events")
        acc += a
        z_count += zc
        z_sum += zs
        z_sumsq += zss
    return acc, z_count, z_sum, z_sumsq


def _summarize(label, params, master_seed, acc, z_count, z_sum, z_sumsq) -> EstimateSummary:
    n = int(acc[K.N_UNITS])
    n_cyc = int(acc[K.N_CYCLES])
    sr, sd, sh = acc[K.S_R], acc[K.S_D], acc[K.S_H]
    srr, sdd, shh = acc[K.S_RR], acc[K.S_DD], acc[K.S_HH]
    srd, srh, sdh = acc[K.S_RD], acc[K.S_RH], acc[K.S_DH]
    scale = params.b / params.tau0
    gam = _ratio_estimate(sr, sd, srr, sdd, srd, n)
    n_sigma = int(acc[K.S_SIGMA])
    z_table = {
        i: _mean_estimate(z_sum[i], z_sumsq[i], int(z_count[i])) for i in range(1, K.Z_TABLE_SIZE) if z_count[i] > 0
    }
    e_dur = _mean_estimate(sd, sdd, n)
    sig = _mean_estimate(acc[K.S_SIGDUR], acc[K.S_SIGDUR2], n_sigma)
    return EstimateSummary(
        label=label,
        params=params,
        n_units=n,
        n_cycles=n_cyc,
        master_seed=master_seed,
        revenue_ratio=Estimate(gam.mean * scale, gam.std_error * scale, n),
        delta=_ratio_estimate(sd, sh, sdd, shh, sdh, n),
        apparent_hashrate=_ratio_estimate(sr, sh, srr, shh, srh, n),
        e_duration=Estimate(e_dur.mean * params.tau0, e_dur.std_error * params.tau0, n),
        e_revenue=_mean_estimate(sr, srr, n),
        e_official=_mean_estimate(sh, shh, n),
        p_sigma=_mean_estimate(acc[K.S_SIGMA], acc[K.S_SIGMA], n_cyc),
        e_n_prime=_mean_estimate(acc[K.S_NP], acc[K.S_NPNP], n_cyc),
        e_sigma_duration=Estimate(sig.mean * params.tau0, sig.std_error * params.tau0, sig.n),
        p_trail_win=_mean_estimate(acc[K.S_EXITLOW], acc[K.S_EXITLOW], n_sigma),
        step_identity_violations=int(acc[K.S_STEP_IDENTITY_VIOLATIONS]),
        z_table=z_table,
    )


def simulate_pattern(
    pattern: list[StrategyId],
    params: NetworkParams,
    n_units: int,
    master_seed: int,
    threads: int = 1,
) -> EstimateSummary:
    """Simulate ``n_units`` repetitions of a fixed sequence of attack cycles.

    ``delta`` and ``apparent_hashrate`` of the result are the composed
    difficulty adjustment and apparent hashrate of the mixed strategy.
    """
    if not pattern:
        raise DomainError("pattern must contain at least one strategy")
    if n_units < 1:
        raise DomainError(f"need at least one cycle, got {n_units}")
    if threads < 1:
        raise DomainError(f"threads must be >= 1, got {threads}")
    kinds, a_values = zip(*(_kind(s) for s in pattern))
    parts = _run_chunks(
        np.array(kinds, dtype=np.int64), np.array(a_values, dtype=np.int64), params, n_units, master_seed, threads
    )
    label = ",".join(s.label for s in pattern)
    return _summarize(label, params, master_seed, *parts)


def estimate_metrics(
    strategy: StrategyId,
    params: NetworkParams,
    n_cycles: int,
    master_seed: int,
    threads: int = 1,
) -> EstimateSummary:
    return simulate_pattern([strategy], params, n_cycles, master_seed, threads)


@dataclass(frozen=True)
class EmbeddingReport:
    n_paths: int
    exit_low: Estimate
    exit_time: Estimate
    expected_exit_low: float
    expected_exit_time: float

    @property
    def consistent(self) -> bool:
        return self.exit_low.within(self.expected_exit_low) and self.exit_time.within(self.expected_exit_time)


def poisson_embedding_check(
    params: NetworkParams, m: int, M: int, n_paths: int, master_seed: int
) -> EmbeddingReport:
    """Race two exponential clocks in continuous time and compare with the hiker formulas.

    The honest lead minus the attacker lead, recentred at ``m``, should be the
    hiker walk with right-step probability ``p``, and its exit time in units of
    ``tau0`` should match the expected number of hiker steps.
    """
    problem = HikerProblem(M, m, params.p)
    exit_low, times = K.poisson_race(m, M, params.p, n_paths, cycle_stream(master_seed, 0), EVENT_CAP)
    if np.any(exit_low < 0):
        raise EventCapExceeded(f"a path exceeded {EVENT_CAP} events")
    low = exit_low.astype(float)
    times = times * params.tau0
    return EmbeddingReport(
        n_paths=n_paths,
        exit_low=_mean_estimate(low.sum(), low.sum(), n_paths),
        exit_time=_mean_estimate(times.sum(), (times**2).sum(), n_paths),
        expected_exit_low=exit_prob_low(problem),
        expected_exit_time=expected_exit_time(problem) * params.tau0,
    )
