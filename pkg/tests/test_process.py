import random
from fractions import Fraction

import pytest

from permac.macdonald import alpha_spec, plancherel_spec, zero_spec
from permac.partitions import partitions_up_to, weight
from permac.process import (
    ProcessSpec,
    analytic_regime_check,
    cauchy_kernel,
    measure,
    moment_bruteforce,
    moment_formula,
    nonperiodic_partition_function,
    pair_kernel_pochhammer,
    partition_function_bruteforce,
    partition_function_closed,
    schur_limit_kernels,
    shift_mixed_moment_bruteforce,
    shift_mixed_moment_formula,
    shift_mixed_partition_function,
    theta_cauchy_check,
    weight_W,
)
from permac.scalars import random_qt_pair
from permac.series import SeriesRing, euler_inverse, qpochhammer, theta3

Q0, T0 = Fraction(1, 3), Fraction(1, 5)


def single_alpha_process(N, q, t, cutoff):
    names = [f"a{i}" for i in range(N)] + [f"b{j}" for j in range(1, N + 1)]
    ring = SeriesRing(["u"] + names, cutoff)
    plus = [alpha_spec([(f"a{i}", 1)], ring, label=f"alpha+{i}") for i in range(N)]
    minus = [alpha_spec([(f"b{j}", 1)], ring, label=f"alpha-{j}")
             for j in range(1, N + 1)]
    return ProcessSpec(ring, q, t, ring.gen("u"), plus, minus)


def test_weight_examples():
    ring = SeriesRing(["u", "a0", "b1"], 4)
    plus = [alpha_spec([("a0", 1)], ring)]
    minus = [alpha_spec([("b1", 1)], ring)]
    ps = ProcessSpec(ring, Q0, T0, ring.gen("u"), plus, minus)
    w = weight_W(ps, [(1,)], [()])
    expect = ring.monomial((1 - T0) / (1 - Q0), a0=1, b1=1)
    assert w == expect
    assert weight_W(ps, [(1,)], [(1,)]) == ring.gen("u")
    assert not weight_W(ps, [(1,)], [(2,)])


def test_weight_support_is_interlacing():
    # nonzero weight forces the cyclic inclusion chain (single-alpha specs
    # additionally force horizontal strips; inclusion is what the weight
    # structure itself guarantees)
    from permac.partitions import contains

    ps = single_alpha_process(2, Q0, T0, 4)
    for lam1 in partitions_up_to(2):
        for lam2 in partitions_up_to(2):
            for mu1 in partitions_up_to(2):
                for mu2 in partitions_up_to(2):
                    w = weight_W(ps, [lam1, lam2], [mu1, mu2])
                    chain = (contains(lam1, mu2) and contains(lam1, mu1)
                             and contains(lam2, mu1) and contains(lam2, mu2))
                    if not chain:
                        assert not w


def test_partition_function_zero_minus_is_euler():
    ring = SeriesRing(["u", "a0"], 5)
    plus = [alpha_spec([("a0", 1)], ring)]
    minus = [zero_spec()]
    ps = ProcessSpec(ring, Q0, T0, ring.gen("u"), plus, minus)
    brute = partition_function_bruteforce(ps, 5)
    assert brute == euler_inverse(ring, ring.gen("u"))
    assert partition_function_closed(ps) == brute


@pytest.mark.parametrize("N,depth", [(1, 5), (2, 4), (3, 4)])
def test_partition_function_closed_vs_bruteforce(N, depth):
    rng = random.Random(100 + N)
    for _ in range(2):
        q, t = random_qt_pair(rng)
        ps = single_alpha_process(N, q, t, depth)
        brute = partition_function_bruteforce(ps, depth)
        closed = partition_function_closed(ps)
        assert brute == closed, (N, q, t)


def test_pair_kernel_pochhammer_route_matches_exp_route():
    ring = SeriesRing(["u", "a", "b"], 6)
    spec_a = alpha_spec([("a", 1)], ring)
    spec_b = alpha_spec([("b", 1)], ring)
    exp_route = cauchy_kernel(ring, Q0, T0, ring.gen("u"),
                              spec_a.p_value, spec_b.p_value)
    poch_route = pair_kernel_pochhammer(ring, Q0, T0, ring.gen("u"), "a", "b")
    assert exp_route == poch_route


def test_schur_point_kernel_is_u_pochhammer():
    # at q = t the pair kernel telescopes to 1/(ab; u)_inf
    q = Fraction(2, 7)
    ring = SeriesRing(["u", "a", "b"], 6)
    kern = pair_kernel_pochhammer(ring, q, q, ring.gen("u"), "a", "b")
    ab = ring.monomial(Fraction(1), a=1, b=1)
    assert kern == qpochhammer(ring, ab, [ring.gen("u")]).inverse()


def test_u_to_zero_limit_is_nonperiodic():
    for N in (1, 2):
        rng = random.Random(60 + N)
        q, t = random_qt_pair(rng)
        ps = single_alpha_process(N, q, t, 4)
        closed = partition_function_closed(ps)
        assert closed.subs_zero("u") == nonperiodic_partition_function(ps)
        brute = partition_function_bruteforce(ps, 4)
        assert brute.subs_zero("u") == nonperiodic_partition_function(ps).truncate(4)


def test_measure_geometric_for_zero_specs():
    ring = SeriesRing(["u"], 6)
    ps = ProcessSpec(ring, Q0, T0, ring.gen("u"), [zero_spec()], [zero_spec()])
    weights, norm = measure(ps, 6)
    assert norm == euler_inverse(ring, ring.gen("u"))
    for lam_seq, w in weights.items():
        assert w == ring.monomial(Fraction(1), u=weight(lam_seq[0]))


def test_measure_u_to_zero_is_nonperiodic():
    # setting u to zero kills every configuration with a nonempty wrapped
    # inner partition, leaving the open-chain (non-periodic) measure
    from permac.process import configurations

    ps = single_alpha_process(2, Q0, T0, 4)
    weights, _norm = measure(ps, 4)
    open_chain = {}
    for lam_seq, mu_seq in configurations(ps, 4):
        if mu_seq[-1] != ():
            continue
        w = weight_W(ps, lam_seq, mu_seq)
        if w:
            key = tuple(lam_seq)
            open_chain[key] = open_chain.get(key, ps.ring.zero()) + w
    for key, w in weights.items():
        expect = open_chain.get(key, ps.ring.zero()).subs_zero("u")
        assert w.subs_zero("u") == expect


def test_measure_numeric_mass():
    # numeric u with zero specs: truncated mass approaches (u;u)_inf^{-1}
    ring = SeriesRing([], 0)
    u = Fraction(1, 4)
    ps = ProcessSpec(ring, Q0, T0, u, [zero_spec()], [zero_spec()])
    weights, norm = measure(ps, 8)
    total = norm.constant_term()
    expected = sum(
        Fraction(len([p for p in partitions_up_to(8) if weight(p) == n])) * u**n
        for n in range(9))
    assert total == expected


def test_moment_zero_specs_E1():
    # E[E_1] for the trivial measure: (u;u)_inf * sum_lam E_1(lam) u^{|lam|}
    ring = SeriesRing(["u"], 5)
    ps = ProcessSpec(ring, Q0, T0, ring.gen("u"), [zero_spec()], [zero_spec()])
    brute = moment_bruteforce(ps, [("E", 1)], 5)
    formula = moment_formula(ps, [("E", 1)])
    # closed product: (1/(1-t^-1)) (u;u)(q t^-1 u;u) / ((qu;u)(t^-1 u;u))
    u = ring.gen("u")
    closed = qpochhammer(ring, u, [u]) \
        * qpochhammer(ring, u * (Q0 / T0), [u]) \
        * qpochhammer(ring, u * Q0, [u]).inverse() \
        * qpochhammer(ring, u * (1 / T0), [u]).inverse() \
        * (Fraction(1) / (1 - 1 / T0))
    assert formula == closed
    assert brute == closed


@pytest.mark.parametrize("tag", ["E", "E'", "G", "G'"])
@pytest.mark.parametrize("r", [1, 2])
def test_single_step_moments_formula_vs_bruteforce(tag, r):
    rng = random.Random(hash((tag, r)) % 10000)
    q, t = random_qt_pair(rng)
    ps = single_alpha_process(1, q, t, 4)
    brute = moment_bruteforce(ps, [(tag, r)], 4)
    formula = moment_formula(ps, [(tag, r)])
    assert formula == brute, (tag, r, q, t)


def test_two_step_E_moment_formula_vs_bruteforce():
    rng = random.Random(321)
    q, t = random_qt_pair(rng)
    ps = single_alpha_process(2, q, t, 3)
    brute = moment_bruteforce(ps, [("E", 1), ("E", 1)], 3)
    formula = moment_formula(ps, [("E", 1), ("E", 1)])
    assert formula == brute


def test_multi_step_rejects_unvalidated_families():
    ps = single_alpha_process(2, Q0, T0, 3)
    with pytest.raises(ValueError):
        moment_formula(ps, [("G", 1), ("E", 1)])


def bessel_series(ring, gname, c, nmax):
    # I_0(2 sqrt(c) gamma) = sum c^n gamma^(2n) / (n!)^2
    out = ring.zero()
    fact = 1
    for n in range(nmax + 1):
        if n:
            fact *= n
        out = out + ring.monomial(c**n / Fraction(fact * fact), **{gname: 2 * n})
    return out


def test_bessel_example_E1():
    rng = random.Random(77)
    q, t = random_qt_pair(rng)
    ring = SeriesRing(["u", "g"], 8)
    xi = ring.gen("g") * (ring.one() - ring.gen("u"))
    plus = [plancherel_spec(xi, ring)]
    minus = [plancherel_spec(xi, ring)]
    ps = ProcessSpec(ring, q, t, ring.gen("u"), plus, minus)
    got = moment_formula(ps, [("E", 1)])
    u = ring.gen("u")
    closed = bessel_series(ring, "g", (1 - t) * (1 / t - 1), 4) \
        * (Fraction(1) / (1 - 1 / t)) \
        * qpochhammer(ring, u, [u]) * qpochhammer(ring, u * (q / t), [u]) \
        * qpochhammer(ring, u * q, [u]).inverse() \
        * qpochhammer(ring, u * (1 / t), [u]).inverse()
    assert got == closed
    brute = moment_bruteforce(ps, [("E", 1)], 8)
    assert brute == closed


def test_bessel_example_E1_prime():
    rng = random.Random(78)
    q, t = random_qt_pair(rng, square_ratio=True)
    ring = SeriesRing(["u", "g"], 8)
    xi = ring.gen("g") * (ring.one() - ring.gen("u"))
    ps = ProcessSpec(ring, q, t, ring.gen("u"),
                     [plancherel_spec(xi, ring)], [plancherel_spec(xi, ring)])
    got = moment_formula(ps, [("E'", 1)])
    u = ring.gen("u")
    closed = bessel_series(ring, "g", (1 - t) ** 2 / q, 4) \
        * (Fraction(1) / (1 - t)) \
        * qpochhammer(ring, u, [u]) * qpochhammer(ring, u * (t / q), [u]) \
        * qpochhammer(ring, u * t, [u]).inverse() \
        * qpochhammer(ring, u * (1 / q), [u]).inverse()
    assert got == closed


def test_bessel_example_E1_prime_nonsquare_ratio():
    # the rho adjunction handles (t/q)^(1/2) when it is irrational
    q, t = Fraction(1, 2), Fraction(1, 3)
    ring = SeriesRing(["u", "g"], 6)
    xi = ring.gen("g") * (ring.one() - ring.gen("u"))
    ps = ProcessSpec(ring, q, t, ring.gen("u"),
                     [plancherel_spec(xi, ring)], [plancherel_spec(xi, ring)])
    got = moment_formula(ps, [("E'", 1)])
    brute = moment_bruteforce(ps, [("E'", 1)], 6)
    assert got == brute


def test_shift_mixed_partition_function_ratio():
    ring = SeriesRing(["v", "a0", "b1"], 6)
    u = ring.monomial(Fraction(1), v=2)
    plus = [alpha_spec([("a0", 1)], ring)]
    minus = [alpha_spec([("b1", 1)], ring)]
    ps = ProcessSpec(ring, Q0, T0, u, plus, minus)
    zeta = Fraction(2, 3)
    mixed = shift_mixed_partition_function(ps, "v", zeta)
    plain = partition_function_closed(ps)
    assert mixed == theta3(ring, "v", zeta) * plain


def test_shift_mixed_moment_formula_vs_bruteforce():
    rng = random.Random(55)
    q, t = random_qt_pair(rng)
    zeta = Fraction(3, 5)
    ring = SeriesRing(["v"], 6)
    u = ring.monomial(Fraction(1), v=2)
    ps = ProcessSpec(ring, q, t, u, [zero_spec()], [zero_spec()])
    brute = shift_mixed_moment_bruteforce(ps, 1, "v", zeta, 6)
    formula = shift_mixed_moment_formula(ps, 1, "v", zeta)
    assert formula == brute


def test_theta_cauchy_r1_trivial():
    out = theta_cauchy_check(1, 4, [Fraction(2, 3)], [Fraction(1, 5)],
                             Fraction(1, 2))
    assert out["match"]


def test_schur_limit_kernels_r2():
    rng = random.Random(808)
    report = schur_limit_kernels(2, 4, rng)
    assert report["match"], report


def test_analytic_regime():
    q, t = Fraction(1, 2), Fraction(1, 3)
    ok = analytic_regime_check("E'", [q / 2], [Fraction(1, 2)], q / 2, 1, q, t)
    assert ok["pass"]
    bad = analytic_regime_check("E", [Fraction(1, 2)], [t], t / 2, 2, q, t)
    assert not bad["pass"]  # alpha_minus needs < t^2
    vac = analytic_regime_check("E", [], [], Fraction(1, 10), 1, q, t)
    assert vac["pass"]
    with pytest.raises(ValueError):
        analytic_regime_check("G", [], [], Fraction(1, 10), 1, q, t)
