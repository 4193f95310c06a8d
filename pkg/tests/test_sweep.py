import csv
from pathlib import Path

import numpy as np
import pytest
from numpy.testing import assert_allclose

from trailmining import sweep as sw
from trailmining.errors import BackendMismatch, DomainError
from trailmining.params import HONEST, LEAD_STUBBORN, SELFISH, StrategyId
from trailmining.sweep import DominanceCell, GridSpec

SNAPSHOTS = Path(__file__).parent / "snapshots"
TSM = [StrategyId.trail_stubborn(a) for a in range(1, 8)]


def single(q, gamma, strategies, **kw):
    return GridSpec(q_min=q, q_max=q, q_steps=1, gamma_min=gamma, gamma_max=gamma, gamma_steps=1, strategies=tuple(strategies), **kw)


def test_grid_defaults():
    grid = GridSpec()
    assert (grid.q_steps, grid.gamma_steps, grid.a_values) == (101, 101, tuple(range(1, 8)))
    assert grid.q_values[0] == 0.001 and grid.q_values[-1] == 0.499
    assert SELFISH not in grid.strategies
    assert SELFISH in GridSpec(backend="hybrid").strategies
    assert SELFISH in GridSpec(gamma_max=0.0).strategies


@pytest.mark.parametrize(
    "kw",
    [dict(q_steps=0), dict(q_max=0.5), dict(gamma_max=1.5), dict(a_values=(0,)), dict(backend="x"), dict(metric="y")],
)
def test_grid_validation(kw):
    with pytest.raises(DomainError):
        GridSpec(**kw)


def test_sm_dominates_near_half():
    (cell,) = sw.sweep(single(0.4999, 0.0, [SELFISH] + TSM))
    assert cell.best == SELFISH
    assert cell.margin > 0


def test_tsm2_dominates_trailing_at_moderate_gamma():
    (cell,) = sw.sweep(single(0.3, 0.5, TSM[1:]))
    assert cell.best == StrategyId.trail_stubborn(2)


def test_zero_hashrate_tie_goes_to_honest():
    for gamma in (0.0, 0.4, 1.0):
        (cell,) = sw.sweep(single(0.0, gamma, [HONEST] + TSM))
        assert all(v == 0 for v in cell.values.values())
        assert cell.best == HONEST and cell.margin == 0


def test_analytic_sm_rejected_for_positive_gamma():
    with pytest.raises(BackendMismatch):
        sw.sweep(single(0.3, 0.5, [SELFISH]))


def test_tie_break_and_scaling():
    ordered = [HONEST, SELFISH, LEAD_STUBBORN, StrategyId.trail_stubborn(2)]
    values = dict(zip(reversed(ordered), [0.2, 0.3, 0.3, 0.1]))
    cell = DominanceCell.from_values(0.1, 0.1, values)
    assert cell.best == SELFISH and cell.margin == 0
    for scale in (0.5, 3.0, 1e-9):
        scaled = DominanceCell.from_values(0.1, 0.1, {k: v * scale for k, v in values.items()})
        assert scaled.best == cell.best


def test_cell_invariants():
    for cell in sw.sweep(GridSpec(q_steps=7, gamma_steps=6)):
        assert cell.values[cell.best] == max(cell.values.values())
        assert cell.margin >= 0


def test_row_major_order_and_thread_independence():
    grid = GridSpec(q_steps=4, gamma_steps=3)
    cells = sw.sweep(grid)
    assert [(c.q, c.gamma) for c in cells] == [(q, g) for q in grid.q_values for g in grid.gamma_values]
    again = sw.sweep(GridSpec(q_steps=4, gamma_steps=3, threads=8))
    assert [c.values for c in cells] == [c.values for c in again]


def test_hybrid_backend():
    grid = GridSpec(q_min=0.3, q_max=0.4, q_steps=2, gamma_min=0.0, gamma_max=0.5, gamma_steps=2,
                    a_values=(1, 2), backend="hybrid", n_cycles=50_000, master_seed=4)
    cells = sw.sweep(grid)
    again = sw.sweep(GridSpec(**{**grid.__dict__, "threads": 3}))
    assert [c.values for c in cells] == [c.values for c in again]
    # gamma = 0 cells take SM from the closed form
    from trailmining.analytic import apparent_hashrate_sm_gamma0

    assert cells[0].values[SELFISH] == apparent_hashrate_sm_gamma0(0.3)
    assert 0.2 < cells[1].values[SELFISH] < 0.5


def test_csv_shape_and_round_trip(tmp_path):
    cells = sw.sweep(GridSpec(q_steps=3, gamma_steps=1, gamma_max=0.0))
    assert len(cells) == 3
    path = tmp_path / "map.csv"
    sw.emit_csv(cells, path)
    rows = list(csv.reader(path.open()))
    assert rows[0] == ["q", "gamma", "strategy", "value"]
    assert len(rows) - 1 == 3 * len(cells[0].values)
    back = sw.parse_csv(path)
    assert [(c.q, c.gamma, c.values, c.best, c.margin) for c in back] == [
        (c.q, c.gamma, c.values, c.best, c.margin) for c in cells
    ]
    best = list(csv.reader((tmp_path / "map.best.csv").open()))
    assert best[0] == ["q", "gamma", "best", "margin"] and len(best) == 4


def test_json_round_trip(tmp_path):
    cells = sw.sweep(GridSpec(q_steps=5, gamma_steps=4))
    sw.emit_json(cells, tmp_path / "map.json")
    back = sw.parse_json(tmp_path / "map.json")
    assert [(c.q, c.gamma, c.values, c.best, c.margin) for c in back] == [
        (c.q, c.gamma, c.values, c.best, c.margin) for c in cells
    ]


def test_empty_csv(tmp_path):
    sw.emit_csv([], tmp_path / "e.csv")
    assert (tmp_path / "e.csv").read_text().strip() == "q,gamma,strategy,value"
    assert sw.parse_csv(tmp_path / "e.csv") == []


def test_unwritable_path(tmp_path):
    with pytest.raises(OSError):
        sw.emit_csv([], tmp_path / "missing" / "x.csv")


def test_fig1_smoke_grid_prefers_a2():
    grid = GridSpec(q_min=0.05, q_max=0.45, q_steps=9, gamma_min=0.0, gamma_max=1.0, gamma_steps=11)
    for cell in sw.fig1_map(grid):
        if cell.gamma >= 0.2 - 1e-12:
            assert cell.best_trailing_a == 2


def test_fig1_vanishes_with_q():
    # every rate is O(q) and the LSM/TSM gap is O(q^2)
    for q in (1e-3, 1e-4, 1e-5):
        grid = GridSpec(q_min=q, q_max=q, q_steps=1, gamma_steps=11)
        for cell in sw.fig1_map(grid):
            assert abs(cell.difference) <= q**2


def test_fig1_gamma_one_snapshot():
    grid = GridSpec(q_min=0.01, q_max=0.49, q_steps=25, gamma_min=1.0, gamma_max=1.0, gamma_steps=1)
    cells = sw.fig1_map(grid)
    with (SNAPSHOTS / "fig1_gamma1.csv").open() as f:
        rows = list(csv.DictReader(f))
    assert len(rows) == len(cells)
    for row, cell in zip(rows, cells):
        assert_allclose([cell.q, cell.lsm, cell.best_trailing], [float(row["q"]), float(row["lsm"]), float(row["best_trailing"])], rtol=1e-12)
        assert cell.best_trailing_a == int(row["best_trailing_a"])
        assert cell.sign == int(row["sign"])


def test_fig1_needs_trailing_a():
    with pytest.raises(DomainError):
        sw.fig1_map(GridSpec(a_values=(1,)))


def test_config(tmp_path):
    path = tmp_path / "grid.cfg"
    path.write_text(
        "# smoke grid\n"
        "q-min = 0.05\nq_max = 0.45\nq_steps = 9  # nine rows\n\n"
        "gamma_steps = 11\na = 2, 3, 4\nbackend = hybrid\ncycles = 1000\nseed = 7\n"
    )
    grid = sw.grid_from_config(sw.read_config(path))
    assert (grid.q_min, grid.q_max, grid.q_steps, grid.gamma_steps) == (0.05, 0.45, 9, 11)
    assert grid.a_values == (2, 3, 4)
    assert (grid.backend, grid.n_cycles, grid.master_seed) == ("hybrid", 1000, 7)
    grid = sw.grid_from_config({"strategies": "honest, tsm:2 lsm"})
    assert grid.strategies == (HONEST, LEAD_STUBBORN, StrategyId.trail_stubborn(2))
    with pytest.raises(DomainError):
        sw.grid_from_config({"colour": "blue"})
    with pytest.raises(DomainError):
        sw.grid_from_config({"q_steps": "many"})
    path.write_text("no equals sign\n")
    with pytest.raises(DomainError):
        sw.read_config(path)


def test_revenue_ratio_metric():
    (cell,) = sw.sweep(single(0.3, 0.5, TSM, metric="revenue_ratio"))
    from trailmining.analytic import revenue_ratio
    from trailmining.params import NetworkParams

    assert_allclose(cell.values[LEAD_STUBBORN], revenue_ratio(NetworkParams(0.3, 0.5), 1), rtol=1e-14)
    assert np.isfinite(list(cell.values.values())).all()
