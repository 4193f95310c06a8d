"""
Dominance maps over the (q, gamma) plane
----------------------------------------

Writes the long-format dominance table and the lead-stubborn versus best
trail-stubborn comparison as CSV, then prints a coarse text rendering of
both.  Output goes to ``demos/out``.
"""

from pathlib import Path

from trailmining import sweep
from trailmining.params import StrategyId

out = Path(__file__).parent / "out"
out.mkdir(exist_ok=True)

grid = sweep.GridSpec(q_min=0.02, q_max=0.48, q_steps=24, gamma_min=0.0, gamma_max=1.0, gamma_steps=21)
cells = sweep.sweep(grid)
sweep.emit_csv(cells, out / "dominance.csv")
fig1 = sweep.fig1_map(grid)
sweep.emit_fig1_csv(fig1, out / "lsm_vs_trailing.csv")

# %%
# Best strategy per cell: ``.`` honest, ``L`` lead-stubborn, digits are the
# trail threshold A.  Rows are gamma (top = 1), columns q.

symbol = {StrategyId("honest"): "."}
best = {(c.q, c.gamma): c.best for c in cells}
print("best strategy")
for gamma in reversed(grid.gamma_values):
    line = ""
    for q in grid.q_values:
        s = best[(q, gamma)]
        line += symbol.get(s) or ("L" if s.a == 1 else str(s.a))
    print(f"gamma={gamma:4.2f} {line}")

# %%
# Sign of (best trail-stubborn - lead-stubborn): ``+`` trailing ahead, ``-``
# lead-stubborn ahead, ``=`` tie (at gamma = 1 there is never a trail phase).

sign = {(c.q, c.gamma): "+-="[[1, -1, 0].index(c.sign)] for c in fig1}
print("\ntrailing vs lead-stubborn")
for gamma in reversed(grid.gamma_values):
    print(f"gamma={gamma:4.2f} " + "".join(sign[(q, gamma)] for q in grid.q_values))
print(f"\nwrote {out / 'dominance.csv'}, {out / 'dominance.best.csv'}, {out / 'lsm_vs_trailing.csv'}")
