"""
When does trail-stubborn mining pay?
------------------------------------

Closed-form cycle metrics for the A-trail-stubborn attacker against a
Monte Carlo run of the same cycles, then the apparent hashrate as a
function of the trail threshold ``A``.
"""

from trailmining import NetworkParams, StrategyId, analytic_metrics, estimate_metrics
from trailmining.analytic import apparent_hashrate_sm_gamma0

params = NetworkParams(q=0.4, gamma=0.0)
m = analytic_metrics(params, 2)
est = estimate_metrics(StrategyId.trail_stubborn(2), params, n_cycles=2_000_000, master_seed=7, threads=4)

print("q = 0.4, gamma = 0, A = 2")
for name in ("e_duration", "e_revenue", "e_official", "delta", "revenue_ratio", "apparent_hashrate"):
    e = getattr(est, name)
    print(f"  {name:<18} exact {getattr(m, name):.6f}   simulated {e.mean:.6f} +/- {e.std_error:.1e}")

# %%
# The revenue ratio before any difficulty adjustment is below ``q``; the
# apparent hashrate afterwards is what decides profitability.

print(f"\nhonest q = {params.q}, revenue ratio {m.revenue_ratio:.5f}, after adjustment {m.apparent_hashrate:.5f}")

# %%
# Scanning ``A``.  With good connectivity ``A = 2`` is the best trailing
# threshold; near ``q = 1/2`` and ``gamma = 0`` selfish mining is ahead of all.

for q, gamma in ((0.3, 0.5), (0.2, 0.8), (0.45, 0.0)):
    p = NetworkParams(q, gamma)
    row = "  ".join(f"A={a}:{analytic_metrics(p, a).apparent_hashrate:.4f}" for a in range(1, 8))
    print(f"q={q:<4} gamma={gamma:<4} {row}")
print(f"selfish mining at q=0.45, gamma=0: {apparent_hashrate_sm_gamma0(0.45):.4f}")
