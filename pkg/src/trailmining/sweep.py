"""Strategy-dominance maps over the ``(q, gamma)`` plane.

Cells are evaluated row-major (``q`` outer, ``gamma`` inner).  Ties are
broken by declared strategy order: Honest < SM < trail-stubborn by
ascending ``A``.
"""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import analytic
from .errors import BackendMismatch, DomainError
from .params import HONEST, SELFISH, NetworkParams, StrategyId
from .simulator import estimate_metrics

__all__ = [
    "GridSpec",
    "DominanceCell",
    "Fig1Cell",
    "sweep",
    "fig1_map",
    "emit_csv",
    "emit_json",
    "emit_fig1_csv",
    "parse_csv",
    "parse_json",
    "read_config",
    "grid_from_config",
]

BACKENDS = ("analytic", "hybrid", "simulation")
METRICS = ("apparent_hashrate", "revenue_ratio")


@dataclass(frozen=True)
class GridSpec:
    q_min: float = 0.001
    q_max: float = 0.499
    q_steps: int = 101
    gamma_min: float = 0.0
    gamma_max: float = 1.0
    gamma_steps: int = 101
    a_values: tuple[int, ...] = (1, 2, 3, 4, 5, 6, 7)
    strategies: tuple[StrategyId, ...] | None = None
    backend: str = "analytic"
    n_cycles: int = 100_000
    master_seed: int = 0
    metric: str = "apparent_hashrate"
    threads: int = 1

    def __post_init__(self):
        if self.q_steps < 1 or self.gamma_steps < 1:
            raise DomainError("grid steps must be >= 1")
        if not (0.0 <= self.q_min <= self.q_max < 0.5):
            raise DomainError(f"q range must satisfy 0 <= q_min <= q_max < 1/2, got [{self.q_min}, {self.q_max}]")
        if not (0.0 <= self.gamma_min <= self.gamma_max <= 1.0):
            raise DomainError(f"gamma range must lie in [0, 1], got [{self.gamma_min}, {self.gamma_max}]")
        if any(int(a) != a or a < 1 for a in self.a_values):
            raise DomainError(f"A values must be integers >= 1, got {self.a_values}")
        if self.backend not in BACKENDS:
            raise DomainError(f"backend must be one of {BACKENDS}, got {self.backend!r}")
        if self.metric not in METRICS:
            raise DomainError(f"metric must be one of {METRICS}, got {self.metric!r}")
        if self.n_cycles < 1 or self.threads < 1:
            raise DomainError("n_cycles and threads must be >= 1")
        strategies = self.strategies
        if strategies is None:
            # SM has a closed form only at gamma = 0, so it joins the default set when it can be evaluated
            with_sm = self.backend != "analytic" or self.gamma_max == 0.0
            strategies = (HONEST,) + ((SELFISH,) if with_sm else ()) + tuple(
                StrategyId.trail_stubborn(a) for a in self.a_values
            )
        object.__setattr__(self, "strategies", tuple(sorted(set(strategies), key=lambda s: s.sort_key)))
        object.__setattr__(self, "a_values", tuple(sorted(set(int(a) for a in self.a_values))))

    @property
    def q_values(self) -> np.ndarray:
        return np.linspace(self.q_min, self.q_max, self.q_steps)

    @property
    def gamma_values(self) -> np.ndarray:
        return np.linspace(self.gamma_min, self.gamma_max, self.gamma_steps)


@dataclass(frozen=True)
class DominanceCell:
    q: float
    gamma: float
    values: dict[StrategyId, float] = field(default_factory=dict)
    best: StrategyId | None = None
    margin: float = 0.0

    @classmethod
    def from_values(cls, q: float, gamma: float, values: dict[StrategyId, float]) -> DominanceCell:
        ordered = sorted(values, key=lambda s: s.sort_key)
        vals = [values[s] for s in ordered]
        i = int(np.argmax(vals))
        rest = vals[:i] + vals[i + 1 :]
        margin = vals[i] - max(rest) if rest else 0.0
        return cls(q, gamma, {s: values[s] for s in ordered}, ordered[i], margin)


@dataclass(frozen=True)
class Fig1Cell:
    q: float
    gamma: float
    lsm: float
    best_trailing_a: int
    best_trailing: float

    @property
    def difference(self) -> float:
        return self.best_trailing - self.lsm

    @property
    def sign(self) -> int:
        return int(np.sign(self.difference))


def _cell_seed(master_seed: int, i: int, j: int, k: int) -> int:
    hi, lo = np.random.SeedSequence(master_seed, spawn_key=(i, j, k)).generate_state(2)
    return (int(hi) << 32) | int(lo)


def _analytic_rows(strategy: StrategyId, q: np.ndarray, gamma: float, metric: str):
    """Closed-form values along a row of ``q`` at fixed ``gamma``; ``None`` if out of scope."""
    if strategy.kind == "honest":
        return q.copy()
    if strategy.kind == "sm":
        if gamma != 0.0 or metric != "apparent_hashrate":
            return None
        return analytic._sm_gamma0(q)
    g = np.full_like(q, gamma)
    if metric == "apparent_hashrate":
        return analytic._main_apparent(q, g, strategy.a)
    return analytic._main_gamma(q, g, strategy.a)


def sweep(grid: GridSpec) -> list[DominanceCell]:
    qs = grid.q_values
    gammas = grid.gamma_values
    table = np.full((len(grid.strategies), len(qs), len(gammas)), math.nan)
    pending = []
    for k, strategy in enumerate(grid.strategies):
        for j, gamma in enumerate(gammas):
            row = None if grid.backend == "simulation" else _analytic_rows(strategy, qs, float(gamma), grid.metric)
            if row is not None:
                table[k, :, j] = row
            elif grid.backend == "analytic":
                raise BackendMismatch(
                    f"no closed form for {strategy.label} at gamma={gamma:g}; use the hybrid or simulation backend"
                )
            else:
                pending.extend((k, i, j) for i in range(len(qs)))

    if pending:

        def work(key):
            k, i, j = key
            est = estimate_metrics(
                grid.strategies[k],
                NetworkParams(qs[i], gammas[j]),
                grid.n_cycles,
                _cell_seed(grid.master_seed, i, j, k),
            )
            return getattr(est, grid.metric).mean

        if grid.threads > 1:
            with ThreadPoolExecutor(max_workers=grid.threads) as pool:
                results = list(pool.map(work, pending))
        else:
            results = [work(key) for key in pending]
        for (k, i, j), v in zip(pending, results):
            table[k, i, j] = v

    cells = []
    for i, q in enumerate(qs):
        for j, gamma in enumerate(gammas):
            values = {s: float(table[k, i, j]) for k, s in enumerate(grid.strategies)}
            cells.append(DominanceCell.from_values(float(q), float(gamma), values))
    return cells


def fig1_map(grid: GridSpec) -> list[Fig1Cell]:
    """Lead-stubborn versus the best trail-stubborn ``A >= 2`` on each cell (closed forms)."""
    trailing = [a for a in grid.a_values if a >= 2]
    if not trailing:
        raise DomainError("fig1 map needs at least one A >= 2")
    qs = grid.q_values
    gammas = grid.gamma_values
    lsm = np.empty((len(qs), len(gammas)))
    trail = np.empty((len(trailing), len(qs), len(gammas)))
    for j, gamma in enumerate(gammas):
        g = np.full_like(qs, gamma)
        lsm[:, j] = analytic._main_apparent(qs, g, 1)
        for k, a in enumerate(trailing):
            trail[k, :, j] = analytic._main_apparent(qs, g, a)
    best = np.argmax(trail, axis=0)
    cells = []
    for i, q in enumerate(qs):
        for j, gamma in enumerate(gammas):
            k = int(best[i, j])
            cells.append(Fig1Cell(float(q), float(gamma), float(lsm[i, j]), trailing[k], float(trail[k, i, j])))
    return cells


def _fmt(x: float) -> str:
    return "%.17g" % x


def _best_path(path: Path) -> Path:
    return path.with_name(path.stem + ".best" + path.suffix)


def emit_csv(cells: list[DominanceCell], path) -> None:
    """Long-format ``q,gamma,strategy,value`` rows plus a sibling ``<stem>.best.csv``."""
    path = Path(path)
    with path.open("w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["q", "gamma", "strategy", "value"])
        for c in cells:
            for s, v in c.values.items():
                w.writerow([_fmt(c.q), _fmt(c.gamma), s.label, _fmt(v)])
    with _best_path(path).open("w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["q", "gamma", "best", "margin"])
        for c in cells:
            w.writerow([_fmt(c.q), _fmt(c.gamma), c.best.label if c.best else "", _fmt(c.margin)])


def parse_csv(path) -> list[DominanceCell]:
    rows: dict[tuple[float, float], dict[StrategyId, float]] = {}
    with Path(path).open(newline="") as f:
        for rec in csv.DictReader(f):
            key = (float(rec["q"]), float(rec["gamma"]))
            rows.setdefault(key, {})[StrategyId.parse(rec["strategy"])] = float(rec["value"])
    return [DominanceCell.from_values(q, g, vals) for (q, g), vals in rows.items()]


def emit_json(cells: list[DominanceCell], path) -> None:
    records = [
        {
            "q": c.q,
            "gamma": c.gamma,
            "values": {s.label: v for s, v in c.values.items()},
            "best": c.best.label if c.best else None,
            "margin": c.margin,
        }
        for c in cells
    ]
    Path(path).write_text(json.dumps(records, indent=1) + "\n")


def parse_json(path) -> list[DominanceCell]:
    cells = []
    for rec in json.loads(Path(path).read_text()):
        values = {StrategyId.parse(k): float(v) for k, v in rec["values"].items()}
        cells.append(DominanceCell.from_values(float(rec["q"]), float(rec["gamma"]), values))
    return cells


_INT_KEYS = {"q_steps", "gamma_steps", "n_cycles", "master_seed", "threads"}
_FLOAT_KEYS = {"q_min", "q_max", "gamma_min", "gamma_max"}
_ALIASES = {"cycles": "n_cycles", "seed": "master_seed", "a": "a_values"}


def read_config(path) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment, dashes in keys become underscores."""
    out = {}
    for n, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"{path}:{n}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def grid_from_config(config: dict[str, str]) -> GridSpec:
    """Build a :class:`GridSpec` from :func:`read_config` output (unset keys keep their defaults)."""
    kw = {}
    for key, value in config.items():
        key = _ALIASES.get(key, key)
        try:
            if key in _INT_KEYS:
                kw[key] = int(value)
            elif key in _FLOAT_KEYS:
                kw[key] = float(value)
            elif key == "a_values":
                kw[key] = tuple(int(v) for v in value.replace(",", " ").split())
            elif key == "strategies":
                kw[key] = tuple(StrategyId.parse(v) for v in value.replace(",", " ").split())
            elif key in ("backend", "metric"):
                kw[key] = value
            else:
                raise DomainError(f"unknown grid key {key!r}")
        except ValueError as exc:
            if isinstance(exc, DomainError):
                raise
            raise DomainError(f"bad value for {key!r}: {value!r}") from None
    return GridSpec(**kw)


def emit_fig1_csv(cells: list[Fig1Cell], path) -> None:
    """``q,gamma,lsm,best_trailing_a,best_trailing,difference,sign`` rows."""
    with Path(path).open("w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["q", "gamma", "lsm", "best_trailing_a", "best_trailing", "difference", "sign"])
        for c in cells:
            w.writerow(
                [_fmt(c.q), _fmt(c.gamma), _fmt(c.lsm), c.best_trailing_a, _fmt(c.best_trailing), _fmt(c.difference), c.sign]
            )
