import math
import random
from fractions import Fraction
from functools import lru_cache

from permac.partitions import partitions_up_to, remove_one_box, weight
from permac.plancherel import (
    TrajectorySpec,
    dims,
    marginal_chi_square,
    marginal_process_weight,
    sample_trajectories,
    semigroup_defect,
    spot_check_float_entries,
    transfer_cycle_weight,
    transfer_matrix,
    truncated_trace_float,
)
from permac.scalars import random_qt_pair
from permac.series import SeriesRing

Q0, T0 = Fraction(1, 3), Fraction(1, 5)


@lru_cache(maxsize=None)
def syt_count(lam):
    if not lam:
        return 1
    return sum(syt_count(mu) for mu in remove_one_box(lam))


def test_dims_examples():
    assert dims("dim", (), (1,), Q0, T0) == 1
    assert dims("dim'", (), (1,), Q0, T0) == (1 - T0) / (1 - Q0)
    for lam in partitions_up_to(4):
        assert dims("dim", lam, lam, Q0, T0) == 1


def test_dims_schur_point_counts_tableaux():
    q = Fraction(1, 2)
    for lam in partitions_up_to(6):
        assert dims("dim", (), lam, q, q) == syt_count(lam)


def test_transfer_vacuum_entry_exact():
    ring = SeriesRing(["g"], 6)
    g = ring.gen("g")
    u = Fraction(1, 2)
    tm = transfer_matrix(g, u, 2, Q0, T0, mode="exact", ring=ring)
    pref = (g * g * ((1 - T0) / (1 - Q0) * (u - 1))).exp()
    assert tm.entries[((), ())] == pref


def test_transfer_entries_nonnegative_float():
    q = t = Fraction(1, 2)
    tm = transfer_matrix(0.7, 0.4, 6, q, t, mode="float")
    assert (tm.entries >= 0).all()


def test_truncated_trace_converges_to_euler():
    gamma, u = 0.6, 0.35
    target = 1.0
    for k in range(1, 200):
        target /= (1 - u**k)
    traces = [truncated_trace_float(gamma, u, d, Q0, T0) for d in range(4, 11)]
    assert all(b > a for a, b in zip(traces, traces[1:]))
    assert traces[-1] < target
    gaps = [target - tr for tr in traces]
    assert all(g2 < g1 / 1.5 for g1, g2 in zip(gaps, gaps[1:]))
    assert gaps[-1] < 5e-3


def test_float_entry_spot_check():
    rng = random.Random(4)
    tm = transfer_matrix(0.5, 0.25, 5, Q0, T0, mode="float")
    assert spot_check_float_entries(tm, Q0, T0, rng) >= 1


def test_semigroup_exact_small():
    ring = SeriesRing(["g"], 5)
    g = ring.gen("g")
    defect = semigroup_defect(g, Fraction(1, 2), Fraction(1, 3), 6, Q0, T0,
                              reserve=4, mode="exact", ring=ring)
    assert defect == 0


def test_semigroup_float_defect_shrinks():
    d1 = semigroup_defect(0.8, 0.5, 0.4, 4, Q0, T0, reserve=2, mode="float")
    d2 = semigroup_defect(0.8, 0.5, 0.4, 7, Q0, T0, reserve=2, mode="float")
    assert d2 < d1


def test_prop44_marginals_match_transfer_cycle():
    # cross-ratio equality of the process weight and the transfer-cycle
    # weight over small state tuples, one and two time points
    rng = random.Random(30)
    q, t = random_qt_pair(rng)
    gamma = Fraction(2, 3)
    for u_list in ([Fraction(1, 2)], [Fraction(1, 2), Fraction(1, 3)]):
        n = len(u_list)
        tuples = []
        for lams in _tuples_up_to(n, 3):
            wp = marginal_process_weight(lams, gamma, u_list, q, t)
            wt = transfer_cycle_weight(lams, gamma, u_list, q, t)
            tuples.append((wp, wt))
        base = next((pair for pair in tuples if pair[0] and pair[1]), None)
        assert base is not None
        for wp, wt in tuples:
            assert wp * base[1] == wt * base[0]


def _tuples_up_to(n, maxwt):
    pool = partitions_up_to(maxwt)
    if n == 1:
        return [(lam,) for lam in pool]
    return [(a, b) for a in pool for b in pool
            if weight(a) + weight(b) <= maxwt]


def test_u_to_zero_marginal_is_open_plancherel():
    # as the period grows (u -> 0) the diagonal entry tends to the
    # non-periodic Plancherel weight gamma^(2|lam|)/(|lam|!)^2 dim dim'
    gamma = Fraction(2, 3)
    for lam in partitions_up_to(3):
        w = weight(lam)
        fact = 1
        for k in range(2, w + 1):
            fact *= k
        target = gamma ** (2 * w) / Fraction(fact) ** 2 \
            * dims("dim", (), lam, Q0, T0) * dims("dim'", (), lam, Q0, T0)
        cyc = transfer_cycle_weight((lam,), gamma, [Fraction(0)], Q0, T0)
        assert cyc == target


def test_sampler_deterministic():
    spec = TrajectorySpec(1.0, 0.8, [0.0, 0.3, 0.7], 4, seed=99, count=5)
    runs1 = list(sample_trajectories(spec, Q0, T0))
    runs2 = list(sample_trajectories(spec, Q0, T0))
    assert runs1 == runs2


def test_sampler_small_gamma_freezes_trajectories():
    # vanishing intensity makes the transfer matrices diagonal-dominant, so
    # trajectories are constant in time; the constant is empty with the
    # geometric probability (u;u)_inf, which tends to 1 for long periods
    beta = 8.0
    spec = TrajectorySpec(beta, 1e-6, [0.0, 2.0, 5.0], 4, seed=3, count=200)
    empty = 0
    for traj in sample_trajectories(spec, Q0, T0):
        states = {lam for _, lam in traj}
        assert len(states) == 1  # constant trajectory
        if states == {()}:
            empty += 1
    u = math.exp(-beta)
    p_empty = 1.0
    for k in range(1, 50):
        p_empty *= 1 - u**k
    assert empty >= 0.9 * p_empty * spec.count


def test_marginal_chi_square_smoke():
    out = marginal_chi_square(0.9, 1.0, 5, Fraction(1, 2), Fraction(1, 2),
                              samples=20000, seed=12345)
    assert out["p_value"] > 0.01


def test_sampler_two_time_joint_matches_cycle_law():
    # empirical joint of (lam(0), lam(b1)) against the exact cyclic product
    import numpy as np

    q = t = Fraction(1, 2)
    beta, b1, gamma, depth = 1.0, 0.4, 0.7, 4
    spec = TrajectorySpec(beta, gamma, [0.0, b1], depth, seed=777, count=30000)
    states = partitions_up_to(depth)
    idx = {lam: i for i, lam in enumerate(states)}
    counts = {}
    for traj in sample_trajectories(spec, q, t):
        key = (traj[0][1], traj[1][1])
        counts[key] = counts.get(key, 0) + 1
    m0 = transfer_matrix(gamma, math.exp(-b1), depth, q, t, mode="float").entries
    m1 = transfer_matrix(gamma, math.exp(-(beta - b1)), depth, q, t,
                         mode="float").entries
    joint = np.zeros((len(states), len(states)))
    for a in range(len(states)):
        for b in range(len(states)):
            joint[a, b] = m0[a, b] * m1[b, a]
    joint /= joint.sum()
    # coarse comparison: every cell within 5 sigma of its expectation
    n = spec.count
    for (la, lb), c in counts.items():
        p = joint[idx[la], idx[lb]]
        sigma = math.sqrt(max(p * (1 - p) * n, 1.0))
        assert abs(c - p * n) < 5 * sigma + 5
