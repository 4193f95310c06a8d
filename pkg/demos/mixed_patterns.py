"""
Mixing strategies does not help
-------------------------------

A fixed pattern of attack cycles has a difficulty adjustment and revenue
rate that are barycenters of its components, weighted by the expected
number of official blocks per cycle.  So a mix never beats its best part.
"""

from trailmining import HONEST, NetworkParams, StrategyId, simulate_pattern
from trailmining.mixed import analytic_summary, compose, no_advantage_check

params = NetworkParams(0.3, 0.5)
pattern = [HONEST, StrategyId.trail_stubborn(2), StrategyId.trail_stubborn(2), StrategyId.trail_stubborn(5)]
parts = [analytic_summary(s, params) for s in pattern]
for s in parts:
    print(f"{s.label:<7} D={s.d:.5f}  Gamma~={s.gamma_tilde:.5f}  mu={s.mu:.5f}")

mix = compose(parts)
report = no_advantage_check(parts)
print(f"\nmix     D={mix.d:.5f}  Gamma~={mix.gamma_tilde:.5f}   best component {report.best_component:.5f}")

# %%
# The same pattern played literally, cycle after cycle.

est = simulate_pattern(pattern, params, n_units=500_000, master_seed=3, threads=4)
print(f"simulated D={est.delta.mean:.5f} +/- {est.delta.std_error:.1e}, "
      f"Gamma~={est.apparent_hashrate.mean:.5f} +/- {est.apparent_hashrate.std_error:.1e}")
