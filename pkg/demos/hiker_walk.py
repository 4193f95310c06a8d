"""
The hiker on a finite trail
---------------------------

A walker starts at ``m`` on ``[0, M]`` and steps right with probability
``p > 1/2``.  The closed forms for the exit side and the exit time are
compared with a tridiagonal linear solve and with sampled paths.
"""

import numpy as np

from trailmining.hiker import HikerProblem, absorption_oracle, closed_forms, sample_hiker_paths

problem = HikerProblem(M=4, m=2, p_right=0.6)
closed = closed_forms(problem)
oracle = absorption_oracle(problem)

print(f"{'quantity':<24}{'closed form':>14}{'linear solve':>14}")
for name, value in vars(closed).items():
    print(f"{name:<24}{value:>14.10f}{getattr(oracle, name):>14.10f}")

# %%
# Sampled paths.  On a low exit the walker took exactly ``m`` more left
# steps than right steps, so the left-step count is ``m/2 + nu/2``.

rng = np.random.default_rng(1)
exit_low, left, right = sample_hiker_paths(problem, 1_000_000, rng)
steps = left + right
print()
print(f"P[low]          sampled {exit_low.mean():.5f}   exact {closed.exit_prob_low:.5f}")
print(f"E[nu]           sampled {steps.mean():.5f}   exact {closed.e_exit_time:.5f}")
print(f"E[nu | low]     sampled {steps[exit_low].mean():.5f}   exact {closed.e_exit_time_given_low:.5f}")
print(f"E[right | high] sampled {right[~exit_low].mean():.5f}   exact {closed.e_right_given_high:.5f}")

# %%
# As ``M`` grows the conditioned time tends to ``m / (p - q)``.

for M in (5, 10, 50, 1000):
    t = closed_forms(HikerProblem(M, 2, 0.6)).e_exit_time_given_low
    print(f"M = {M:>4}: E[nu | low] = {t:.8f}")
print(f"limit     {2 / 0.2:.8f}")
