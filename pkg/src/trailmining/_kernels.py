"""Compiled event loops.

Every block race is simulated through its embedded jump chain: one
``Exp(1)`` holding time (units of ``tau0``) and one uniform that decides who
found the block.  ``u < q`` is the attacker, ``q <= u < q + gamma*p`` is an
honest miner building on the attacker's published branch (only meaningful
while such a branch is on offer), anything else is an honest miner on the
honest branch.
"""

import numpy as np
from numba import njit

HONEST = 0
SELFISH = 1
TRAIL = 2

# per-cycle outcome tuple:
# (status, duration, revenue, height, sigma, n_prime_tau, z_tau, left, right, sigma_duration)
OK = 0
CAPPED = -1

# accumulator slots, one unit = one pattern repetition (one cycle for a pure strategy)
N_UNITS = 0
S_R = 1
S_D = 2
S_H = 3
S_RR = 4
S_DD = 5
S_HH = 6
S_RD = 7
S_RH = 8
S_DH = 9
# per-cycle slots
N_CYCLES = 10
S_SIGMA = 11
S_NP = 12
S_NPNP = 13
S_SIGDUR = 14
S_SIGDUR2 = 15
S_EXITLOW = 16
S_STEP_IDENTITY_VIOLATIONS = 17
ACC_SIZE = 18

Z_TABLE_SIZE = 64


@njit(cache=True, nogil=True)
def _shadow_catch_up(lead, q, rng, cap):
    """Attacker blocks found while an attacker lead of ``lead`` decays to 0 (no time kept)."""
    extra = 0
    events = 0
    while lead > 0:
        events += 1
        if events > cap:
            return -1
        if rng.random() < q:
            lead += 1
            extra += 1
        else:
            lead -= 1
    return extra


@njit(cache=True, nogil=True)
def honest_cycle(q, rng, cap):
    dur = rng.exponential()
    if rng.random() < q:
        extra = _shadow_catch_up(1, q, rng, cap)
        if extra < 0:
            return CAPPED, dur, 0, 0, False, 0, 0, 0, 0, 0.0
        return OK, dur, 1, 1, False, 1 + extra, 0, 0, 0, 0.0
    return OK, dur, 0, 1, False, 0, 0, 0, 0, 0.0


@njit(cache=True, nogil=True)
def selfish_cycle(q, gamma, rng, cap):
    p = 1.0 - q
    dur = rng.exponential()
    if rng.random() >= q:
        return OK, dur, 0, 1, False, 0, 0, 0, 0, 0.0
    dur += rng.exponential()
    u = rng.random()
    if u >= q:
        # lead of one matched: decisive competition
        dur += rng.exponential()
        u = rng.random()
        if u < q:
            return OK, dur, 2, 2, False, 1, 0, 0, 0, 0.0
        if u < q + gamma * p:
            return OK, dur, 1, 2, False, 1, 0, 0, 0, 0.0
        return OK, dur, 0, 2, False, 1, 0, 0, 0, 0.0
    # lead 2: withhold until the lead falls back to 1, then publish everything
    n_att = 2
    lead = 2
    events = 2
    while lead >= 2:
        events += 1
        if events > cap:
            return CAPPED, dur, 0, 0, False, 0, 0, 0, 0, 0.0
        dur += rng.exponential()
        if rng.random() < q:
            n_att += 1
            lead += 1
        else:
            lead -= 1
    extra = _shadow_catch_up(1, q, rng, cap)
    if extra < 0:
        return CAPPED, dur, 0, 0, False, 0, 0, 0, 0, 0.0
    return OK, dur, n_att, n_att, False, n_att + extra, 0, 0, 0, 0.0


@njit(cache=True, nogil=True)
def trail_cycle(q, gamma, a, rng, cap):
    p = 1.0 - q
    on_attacker = q + gamma * p
    dur = rng.exponential()
    if rng.random() >= q:
        return OK, dur, 0, 1, False, 0, 0, 0, 0, 0.0

    # attacker leads; race until the honest chain has caught up
    n_att = 1
    n_hon = 0
    z = 0
    events = 1
    while n_hon < n_att:
        events += 1
        if events > cap:
            return CAPPED, dur, 0, 0, False, 0, 0, 0, 0, 0.0
        dur += rng.exponential()
        u = rng.random()
        if u < q:
            n_att += 1
        else:
            # the attacker has published his block at height n_hon; a gamma share
            # of honest miners builds on it, making his first n_hon blocks official
            if n_hon >= 1 and u < on_attacker:
                z = n_hon
            n_hon += 1
    n = n_att

    # decisive competition
    dur += rng.exponential()
    u = rng.random()
    if u < q:
        return OK, dur, n + 1, n + 1, False, n, z, 0, 0, 0.0
    if u < on_attacker:
        return OK, dur, n, n + 1, False, n, z, 0, 0, 0.0

    # one block behind: trail phase is the hiker started at 2 on [0, a + 1]
    x = 2
    top = a + 1
    left = 0
    right = 0
    sig_dur = 0.0
    while x > 0 and x < top:
        events += 1
        if events > cap:
            return CAPPED, dur, 0, 0, False, 0, 0, 0, 0, 0.0
        e = rng.exponential()
        sig_dur += e
        if rng.random() < q:
            x -= 1
            left += 1
        else:
            x += 1
            right += 1
    dur += sig_dur
    if x == 0:
        return OK, dur, n + left, n + left, True, n, z, left, right, sig_dur
    return OK, dur, z, n + 1 + right, True, n, z, left, right, sig_dur


@njit(cache=True, nogil=True)
def run_cycle(kind, a, q, gamma, rng, cap):
    if kind == TRAIL:
        return trail_cycle(q, gamma, a, rng, cap)
    if kind == SELFISH:
        return selfish_cycle(q, gamma, rng, cap)
    return honest_cycle(q, rng, cap)


@njit(cache=True, nogil=True)
def run_units(kinds, a_values, q, gamma, n_units, rng, cap):
    """Simulate ``n_units`` repetitions of a cycle pattern and return running sums.

    Returns ``(status, acc, z_count, z_sum, z_sumsq)``; the Z table is only
    fed by trail-stubborn cycles.
    """
    acc = np.zeros(ACC_SIZE)
    z_count = np.zeros(Z_TABLE_SIZE, dtype=np.int64)
    z_sum = np.zeros(Z_TABLE_SIZE)
    z_sumsq = np.zeros(Z_TABLE_SIZE)
    n_pattern = kinds.shape[0]
    for _ in range(n_units):
        ur = 0.0
        ud = 0.0
        uh = 0.0
        for j in range(n_pattern):
            kind = kinds[j]
            status, dur, rev, height, sigma, n_prime, z, left, right, sig_dur = run_cycle(
                kind, a_values[j], q, gamma, rng, cap
            )
            if status != OK:
                return status, acc, z_count, z_sum, z_sumsq
            ur += rev
            ud += dur
            uh += height
            acc[N_CYCLES] += 1.0
            acc[S_NP] += n_prime
            acc[S_NPNP] += n_prime * n_prime
            if sigma:
                acc[S_SIGMA] += 1.0
                acc[S_SIGDUR] += sig_dur
                acc[S_SIGDUR2] += sig_dur * sig_dur
                if left - right == 2:
                    acc[S_EXITLOW] += 1.0
                elif right - left != a_values[j] - 1:
                    acc[S_STEP_IDENTITY_VIOLATIONS] += 1.0
            if kind == TRAIL and n_prime > 0 and n_prime < Z_TABLE_SIZE:
                z_count[n_prime] += 1
                z_sum[n_prime] += z
                z_sumsq[n_prime] += z * z
        acc[N_UNITS] += 1.0
        acc[S_R] += ur
        acc[S_D] += ud
        acc[S_H] += uh
        acc[S_RR] += ur * ur
        acc[S_DD] += ud * ud
        acc[S_HH] += uh * uh
        acc[S_RD] += ur * ud
        acc[S_RH] += ur * uh
        acc[S_DH] += ud * uh
    return OK, acc, z_count, z_sum, z_sumsq


@njit(cache=True, nogil=True)
def hiker_path(m, M, p, rng, cap):
    x = m
    left = 0
    right = 0
    steps = 0
    while x > 0 and x < M:
        steps += 1
        if steps > cap:
            return -1, left, right
        if rng.random() < p:
            x += 1
            right += 1
        else:
            x -= 1
            left += 1
    return 1 if x == 0 else 0, left, right


@njit(cache=True, nogil=True)
def hiker_paths(m, M, p, n_paths, rng, cap):
    exit_low = np.zeros(n_paths, dtype=np.int64)
    left = np.zeros(n_paths, dtype=np.int64)
    right = np.zeros(n_paths, dtype=np.int64)
    for i in range(n_paths):
        exit_low[i], left[i], right[i] = hiker_path(m, M, p, rng, cap)
    return exit_low, left, right


@njit(cache=True, nogil=True)
def poisson_race(m, M, p, n_paths, rng, cap):
    """Two independent exponential clocks (honest rate ``p``, attacker rate ``1-p``).

    Each path runs until the attacker leads by ``m`` (low exit) or the honest
    miners lead by ``M - m`` (high exit).  Returns ``(exit_low, exit_time)``.
    """
    q = 1.0 - p
    exit_low = np.zeros(n_paths, dtype=np.int64)
    times = np.zeros(n_paths)
    for i in range(n_paths):
        t = 0.0
        diff = 0
        next_h = rng.exponential() / p
        next_a = rng.exponential() / q
        events = 0
        while -diff < m and diff < M - m:
            events += 1
            if events > cap:
                exit_low[i] = -1
                break
            if next_h < next_a:
                t = next_h
                diff += 1
                next_h = t + rng.exponential() / p
            else:
                t = next_a
                diff -= 1
                next_a = t + rng.exponential() / q
        if exit_low[i] == 0:
            exit_low[i] = 1 if -diff >= m else 0
        times[i] = t
    return exit_low, times
