"""Periodic Macdonald processes: weights, partition functions, moments.

A process is specified by a period N, specialization sequences rho_plus
(indices 0..N-1) and rho_minus (indices 1..N), and a weight parameter u that
is either a ring monomial (formal, graded) or an exact rational.  The cyclic
weight of a configuration (lambda^1..lambda^N, mu^1..mu^N) is

    u^{|mu^N|} prod_i Q_{lambda^i/mu^i}(rho^-_i) P_{lambda^{i+1}/mu^i}(rho^+_i)

with lambda^{N+1} = lambda^1 and rho^+_N = rho^+_0.  Closed forms are checked
against literal sums over configurations throughout; the moment formulas use
the symmetrized Cauchy-determinant calculus from the laurent module, never
expanding the ill-defined diagonal kernel entries.
"""

from __future__ import annotations

from fractions import Fraction

from .laurent import LaurentPoly, cauchy_sym_prefactor, laurent_exp, \
    product_coefficient, ratio_sym_factor
from .macdonald import observable, skew_eval
from .partitions import contains, partitions_up_to, weight
from .scalars import QRho, as_fraction, rho_root
from .series import SeriesRing, TruncSeries, qpochhammer, theta3


class ProcessSpec:
    """Parameters of an N-step periodic process over a series ring."""

    def __init__(self, ring: SeriesRing, q: Fraction, t: Fraction,
                 u, rho_plus, rho_minus):
        self.ring = ring
        self.q = Fraction(q)
        self.t = Fraction(t)
        self.u = u  # TruncSeries monomial or Fraction
        self.rho_plus = list(rho_plus)    # rho^+_0 .. rho^+_{N-1}
        self.rho_minus = list(rho_minus)  # rho^-_1 .. rho^-_N
        if len(self.rho_plus) != len(self.rho_minus):
            raise ValueError("rho_plus and rho_minus must have equal length")
        self.N = len(self.rho_plus)
        self._skew_cache: dict = {}

    # -- u bookkeeping ------------------------------------------------------

    def u_is_formal(self) -> bool:
        return isinstance(self.u, TruncSeries)

    def u_degree(self) -> int:
        if not self.u_is_formal():
            return 0
        ((e, _),) = self.u.terms.items()
        return self.ring.degree_of(e)

    def u_pow(self, k: int):
        if k == 0:
            return self.ring.one()
        if self.u_is_formal():
            return self.u ** k
        return self.ring.scalar(self.u ** k)

    def u_pow_scalar(self, n: int):
        """u^n as a scalar (numeric) or series (formal) for kernel weights."""
        return self.u_pow(n)

    # -- skew values ---------------------------------------------------------

    def skew(self, kind: str, lam: tuple, mu: tuple, side: str, index: int):
        """Cached skew value; side '+'/'-' picks the specialization list."""
        spec = self.rho_plus[index] if side == "+" else self.rho_minus[index]
        key = (kind, lam, mu, side, index)
        hit = self._skew_cache.get(key)
        if hit is None:
            hit = skew_eval(kind, lam, mu, spec, self.q, self.t,
                            unit=self.ring.one())
            self._skew_cache[key] = hit
        return hit

    def spec_degree(self, side: str, index: int) -> int:
        spec = self.rho_plus[index] if side == "+" else self.rho_minus[index]
        return spec.degree

    def spec_is_zero(self, side: str, index: int) -> bool:
        spec = self.rho_plus[index] if side == "+" else self.rho_minus[index]
        return spec.kind == "zero"


def weight_W(pspec: ProcessSpec, lam_seq, mu_seq) -> TruncSeries:
    """Weight of one configuration; zero unless the cyclic chain interlaces."""
    N = pspec.N
    if len(lam_seq) != N or len(mu_seq) != N:
        raise ValueError("sequences must have length N")
    for i in range(N):
        lam_next = lam_seq[(i + 1) % N]
        if not (contains(lam_seq[i], mu_seq[i]) and contains(lam_next, mu_seq[i])):
            return pspec.ring.zero()
    out = pspec.u_pow(weight(mu_seq[N - 1]))
    for i in range(1, N + 1):
        lam_i = lam_seq[i - 1]
        mu_i = mu_seq[i - 1]
        lam_next = lam_seq[i % N]
        out = out * pspec.skew("Q", lam_i, mu_i, "-", i - 1)
        out = out * pspec.skew("P", lam_next, mu_i, "+", i % N)
        if not out:
            return pspec.ring.zero()
    return out


# ---------------------------------------------------------------------------
# Configuration enumeration (graded truncation)
# ---------------------------------------------------------------------------


def _partitions_containing(mu: tuple, max_weight: int):
    return [lam for lam in partitions_up_to(max_weight) if contains(lam, mu)]


def _partitions_inside(lam: tuple):
    return [mu for mu in partitions_up_to(weight(lam)) if contains(lam, mu)]


def configurations(pspec: ProcessSpec, depth: int):
    """All configurations whose weight has graded degree <= depth.

    Requires every non-zero specialization (and u, unless numeric truncation
    is acceptable to the caller) to carry positive degree, so the budget
    bounds the enumeration.  Yields (lam_seq, mu_seq) pairs.
    """
    N = pspec.N
    du = pspec.u_degree()
    if pspec.u_is_formal() and du == 0:
        raise ValueError("formal u must have positive degree")
    for side in ("+", "-"):
        for i in range(N):
            if not pspec.spec_is_zero(side, i) and pspec.spec_degree(side, i) == 0:
                raise ValueError(
                    "graded enumeration needs formal or zero specializations")

    mu0_max = depth // du if du else depth
    for mu0 in partitions_up_to(mu0_max):
        base_cost = du * weight(mu0)
        if base_cost > depth:
            continue

        def walk(i, prev_mu, budget, lams, mus):
            # step up prev_mu -> lam^{i+1} through rho^+_{i mod N}
            idx = i % N
            if pspec.spec_is_zero("+", idx):
                ups = [prev_mu]
            else:
                d = pspec.spec_degree("+", idx)
                ups = _partitions_containing(prev_mu, weight(prev_mu) + budget // d)
            for lam in ups:
                cost_up = pspec.spec_degree("+", idx) * (weight(lam) - weight(prev_mu))
                b1 = budget - cost_up
                if b1 < 0:
                    continue
                if i + 1 == N:
                    # closing condition: lam^N must contain mu0, pay rho^-_N
                    if pspec.spec_is_zero("-", N - 1):
                        if lam != mu0:
                            continue
                        cost_dn = 0
                    else:
                        if not contains(lam, mu0):
                            continue
                        cost_dn = pspec.spec_degree("-", N - 1) * (weight(lam) - weight(mu0))
                    if cost_dn <= b1:
                        yield lams + [lam], mus + [mu0]
                    continue
                # step down lam -> mu^{i+1} through rho^-_{i+1}
                if pspec.spec_is_zero("-", i):
                    downs = [lam]
                else:
                    downs = _partitions_inside(lam)
                for mu in downs:
                    cost_dn = pspec.spec_degree("-", i) * (weight(lam) - weight(mu))
                    b2 = b1 - cost_dn
                    if b2 < 0:
                        continue
                    yield from walk(i + 1, mu, b2, lams + [lam], mus + [mu])

        # the chain starts at mu^N = mu0 and steps up through rho^+_0;
        # mus collected along the way are mu^1..mu^{N-1}, then mu^N = mu0
        for lam_seq, mu_partial in walk(0, mu0, depth - base_cost, [], []):
            yield lam_seq, mu_partial


def partition_function_bruteforce(pspec: ProcessSpec, depth: int) -> TruncSeries:
    """Literal configuration sum, exact through graded degree <= depth."""
    out = pspec.ring.zero()
    for lam_seq, mu_seq in configurations(pspec, depth):
        out = out + weight_W(pspec, lam_seq, mu_seq)
    return out.truncate(depth)


def cauchy_kernel(ring: SeriesRing, q, t, u, p_plus, p_minus,
                  weight_n=None) -> TruncSeries:
    """exp( sum_n (1-t^n)/(1-q^n) w_n p_n(rho+) p_n(rho-) / (n (1-u^n)) ).

    ``weight_n`` maps n to an extra numerator weight (default 1, u^n for the
    wrapped pairs of the periodic partition function).
    """
    expo = ring.zero()
    for n in range(1, ring.cutoff + 1):
        pp = p_plus(n)
        pm = p_minus(n)
        if not pp or not pm:
            continue
        term = pp * pm * ((1 - t**n) / (1 - q**n) * Fraction(1, n))
        if isinstance(u, TruncSeries):
            geom = ring.zero()  # 1/(1-u^n) = sum_j u^(n j)
            j = 0
            while True:
                mono = u ** (n * j) if j else ring.one()
                if not mono:
                    break
                geom = geom + mono
                j += 1
            term = term * geom
        else:
            term = term * (Fraction(1) / (1 - Fraction(u) ** n))
        if weight_n is not None:
            term = term * weight_n(n)
        expo = expo + term
    return expo.exp()


def partition_function_closed(pspec: ProcessSpec) -> TruncSeries:
    """Euler factor times the Cauchy kernels over ordered index pairs.

    Pairs j > i take the full kernel; wrapped pairs j <= i carry an extra u^n
    inside the exponent (equivalently the ratio of the u-kernel by the u=0
    kernel).  The exponential route is always available; two-variable
    Pochhammer products for alpha pairs agree with it and are covered by
    tests.
    """
    ring = pspec.ring
    if pspec.u_is_formal():
        euler = qpochhammer(ring, pspec.u, [pspec.u]).inverse()
    else:
        raise ValueError("closed partition function needs a formal u")
    out = euler
    for i in range(pspec.N):         # rho^+_i, i = 0..N-1
        for j in range(1, pspec.N + 1):  # rho^-_j, j = 1..N
            pp = pspec.rho_plus[i].p_value
            pm = pspec.rho_minus[j - 1].p_value
            if j > i:
                wn = None
            else:
                wn = lambda n: pspec.u_pow(n)
            out = out * cauchy_kernel(ring, pspec.q, pspec.t, pspec.u,
                                      pp, pm, weight_n=wn)
    return out


def pair_kernel_pochhammer(ring: SeriesRing, q, t, u, alpha_name: str,
                           beta_name: str) -> TruncSeries:
    """(t a b; q, u)_inf / (a b; q, u)_inf for two formal alpha monomials."""
    ab = ring.monomial(Fraction(1), **{alpha_name: 1, beta_name: 1})
    num = qpochhammer(ring, ab * t, [q, u])
    den = qpochhammer(ring, ab, [q, u])
    return num * den.inverse()


def nonperiodic_partition_function(pspec: ProcessSpec) -> TruncSeries:
    """The u -> 0 limit: kernels over strictly increasing pairs only."""
    ring = pspec.ring
    out = ring.one()
    for i in range(pspec.N):
        for j in range(i + 1, pspec.N + 1):
            out = out * cauchy_kernel(ring, pspec.q, pspec.t, Fraction(0),
                                      pspec.rho_plus[i].p_value,
                                      pspec.rho_minus[j - 1].p_value)
    return out


def measure(pspec: ProcessSpec, depth: int):
    """Truncated probability weights per lambda sequence.

    Returns (weights, normalizer): weights maps lam_seq tuples to truncated
    series sums over mu, and normalizer is the brute-force partition
    function; the measure is weights / normalizer.  In numeric mode (all
    data rational) the values are rationals and the truncated mass defect
    against the closed form can be reported by the caller.
    """
    acc: dict = {}
    for lam_seq, mu_seq in configurations(pspec, depth):
        w = weight_W(pspec, lam_seq, mu_seq)
        if not w:
            continue
        key = tuple(lam_seq)
        acc[key] = acc.get(key, pspec.ring.zero()) + w
    norm = pspec.ring.zero()
    for w in acc.values():
        norm = norm + w
    return acc, norm


# ---------------------------------------------------------------------------
# Moments
# ---------------------------------------------------------------------------


def moment_bruteforce(pspec: ProcessSpec, series_r, depth: int) -> TruncSeries:
    """E[f_1[1] ... f_N[N]] as a truncated series quotient.

    ``series_r`` lists one (series_tag, r) per step; observables are exact
    rationals on partitions, so the numerator is a configuration sum like the
    partition function with an extra rational factor.
    """
    if len(series_r) != pspec.N:
        raise ValueError("need one observable per step")
    num = pspec.ring.zero()
    den = pspec.ring.zero()
    obs_cache: dict = {}
    for lam_seq, mu_seq in configurations(pspec, depth):
        w = weight_W(pspec, lam_seq, mu_seq)
        if not w:
            continue
        den = den + w
        f = Fraction(1)
        for (tag, r), lam in zip(series_r, lam_seq):
            key = (tag, r, lam)
            v = obs_cache.get(key)
            if v is None:
                v = observable(tag, r, lam, pspec.q, pspec.t)
                obs_cache[key] = v
            f *= v
        num = num + w * f
    return (num.truncate(depth) * den.truncate(depth).inverse()).truncate(depth)


def _family_pole_and_params(tag: str, q: Fraction, t: Fraction):
    if tag == "E":
        return Fraction(1) / t, (q, Fraction(1) / t), "eta", 1
    if tag == "G":
        return q, (q, Fraction(1) / t), "eta", -1
    if tag == "E'":
        return t, (Fraction(1) / q, t), "xi", 1
    if tag == "G'":
        return Fraction(1) / q, (Fraction(1) / q, t), "xi", -1
    raise ValueError(f"unknown observable series {tag!r}")


def _kernel_exp_factor(pspec: ProcessSpec, kind: str, a: int, zvars, iz,
                       clip: int) -> LaurentPoly:
    """Per-variable exponential factor of the moment kernel for step a.

    eta kind (families E, G): positive powers carry (1-t^{-n}) p_n(rho^+_b)
    with the step-dependent u weights, negative powers carry -(1-t^n)
    p_n(rho^-_b); xi kind flips both signs and inserts (t/q)^{n/2}.
    """
    ring = pspec.ring
    q, t = pspec.q, pspec.t
    N = pspec.N
    rho = rho_root(t / q)
    arg = LaurentPoly(tuple(zvars), ring, {})
    nmax = ring.cutoff if ring.cutoff else 0
    for n in range(1, nmax + 1):
        if pspec.u_is_formal():
            geom = ring.zero()  # 1/(1-u^n)
            j = 0
            while True:
                mono = pspec.u ** (n * j) if j else ring.one()
                if not mono:
                    break
                geom = geom + mono
                j += 1
            un = pspec.u ** n
        else:
            geom = ring.scalar(Fraction(1) / (1 - Fraction(pspec.u) ** n))
            un = ring.scalar(Fraction(pspec.u) ** n)
        cplus = ring.zero()
        for b in range(N):
            pv = pspec.rho_plus[b].p_value(n)
            if not pv:
                continue
            w = un if b >= a else ring.one()
            cplus = cplus + pv * w
        cminus = ring.zero()
        for b in range(1, N + 1):
            pv = pspec.rho_minus[b - 1].p_value(n)
            if not pv:
                continue
            w = un if b < a else ring.one()
            cminus = cminus + pv * w
        if kind == "eta":
            cp = cplus * geom * ((1 - t**-n) * Fraction(1, n))
            cm = cminus * geom * (-(1 - t**n) * Fraction(1, n))
        else:
            rn = rho**n
            cp = cplus * geom * (-(1 - t**-n) * Fraction(1, n)) * rn
            cm = cminus * geom * ((1 - t**n) * Fraction(1, n)) * rn
        if cp:
            arg = arg + LaurentPoly(tuple(zvars), ring, {_unit_exp(zvars, iz, n): cp})
        if cm:
            arg = arg + LaurentPoly(tuple(zvars), ring, {_unit_exp(zvars, iz, -n): cm})
    return laurent_exp(arg, clip)


def _unit_exp(zvars, iz, k):
    e = [0] * len(zvars)
    e[iz] = k
    return tuple(e)


def _delta_pair_factor(pspec: ProcessSpec, p1, p2, zvars, i_num, i_den,
                       wrapped: bool, clip: int) -> LaurentPoly:
    """One ordered-pair factor of the universal measure Delta.

    exp(-sum_n (1-p1^n)(1-p2^n) x^n [u^n]^wrapped / (n (1-u^n))) with
    x = z_{i_num}/z_{i_den}; ``wrapped`` marks pairs (a >= b) which carry the
    extra u^n.  For i_num == i_den the factor is a pure series in u.
    """
    ring = pspec.ring
    arg = LaurentPoly(tuple(zvars), ring, {})
    for n in range(1, max(ring.cutoff, clip) + 1):
        c = -(1 - p1**n) * (1 - p2**n) * Fraction(1, n)
        if not c:
            continue
        if pspec.u_is_formal():
            geom = ring.zero()
            j = 0
            while True:
                mono = pspec.u ** (n * j) if j else ring.one()
                if not mono:
                    break
                geom = geom + mono
                j += 1
            if wrapped:
                geom = geom * (pspec.u ** n)
                if not geom:
                    continue
        else:
            un = Fraction(pspec.u) ** n
            geom = ring.scalar((un if wrapped else Fraction(1)) / (1 - un))
        e = [0] * len(zvars)
        e[i_num] += n
        e[i_den] -= n
        if max(abs(x) for x in e) > clip and i_num != i_den:
            break
        arg = arg + LaurentPoly(tuple(zvars), ring, {tuple(e): geom * c})
    return laurent_exp(arg, clip)


def moment_formula(pspec: ProcessSpec, series_r, clip: int = None) -> TruncSeries:
    """Moment through the free-field kernel formulas.

    The N-step form exists for the E family; the other three families are
    single-step only (their multi-step kernels are not part of the validated
    surface and raise).  The result is already normalized: the partition
    function cancels inside the derivation.
    """
    N = pspec.N
    tags = [tag for tag, _ in series_r]
    if N > 1 and any(tag != "E" for tag in tags):
        raise ValueError("multi-step moment formulas are validated only for E")
    ring = pspec.ring
    q, t = pspec.q, pspec.t
    if clip is None:
        clip = ring.cutoff + 2

    zvars = []
    groups = []  # (tag, [variable indices])
    for a, (tag, r) in enumerate(series_r, start=1):
        idxs = []
        for i in range(r):
            idxs.append(len(zvars))
            zvars.append(f"z{a}_{i + 1}")
        groups.append((tag, idxs))
    zvars = tuple(zvars)

    factors = []
    prefactor = Fraction(1)
    for (tag, idxs), (_, r) in zip(groups, series_r):
        pole, _, _, sign = _family_pole_and_params(tag, q, t)
        prefactor *= (sign ** r) * cauchy_sym_prefactor(pole, r)
        for ii in range(len(idxs)):
            for jj in range(ii + 1, len(idxs)):
                factors.append(ratio_sym_factor(zvars, ring, idxs[ii], idxs[jj],
                                                pole, clip))
    # kernel exponentials per variable
    for a, (tag, idxs) in enumerate(groups, start=1):
        _, _, kind, _ = _family_pole_and_params(tag, q, t)
        for iz in idxs:
            factors.append(_kernel_exp_factor(pspec, kind, a, zvars, iz, clip))
    # universal measure part over all ordered group pairs
    p1, p2 = _family_pole_and_params(tags[0], q, t)[1]
    for b, (_, idxs_b) in enumerate(groups, start=1):
        for a, (_, idxs_a) in enumerate(groups, start=1):
            for j in idxs_b:
                for i in idxs_a:
                    if a < b:
                        factors.append(_delta_pair_factor(
                            pspec, p1, p2, zvars, j, i, wrapped=False, clip=clip))
                    else:
                        factors.append(_delta_pair_factor(
                            pspec, p1, p2, zvars, j, i, wrapped=True, clip=clip))
    target = (0,) * len(zvars)
    value = product_coefficient(factors, target)
    out = value * prefactor
    return _project_rational_coeffs(out)


def _project_rational_coeffs(ts: TruncSeries) -> TruncSeries:
    """Drop QRho wrappers; a residual rho component signals an internal bug."""
    terms = {}
    for e, c in ts.terms.items():
        terms[e] = as_fraction(c) if isinstance(c, QRho) else c
    return TruncSeries(ts.ring, terms)


# ---------------------------------------------------------------------------
# Shift-mixed extension (N = 1)
# ---------------------------------------------------------------------------


def shift_mixed_partition_function(pspec: ProcessSpec, v_name: str, zeta):
    """theta_3(zeta; u) times the N=1 partition function, u = v^2."""
    if pspec.N != 1:
        raise ValueError("shift-mixed quantities are single-step")
    th = theta3(pspec.ring, v_name, zeta)
    return th * partition_function_closed(pspec)


def shift_mixed_moment_formula(pspec: ProcessSpec, r: int, v_name: str, zeta,
                               clip: int = None) -> TruncSeries:
    """Charged moment of the shifted E observable.

    Equals the plain N=1 E moment times theta_3(zeta t^-r; u)/theta_3(zeta; u).
    """
    base = moment_formula(pspec, [("E", r)], clip=clip)
    tnum = theta3(pspec.ring, v_name, zeta * pspec.t ** (-r))
    tden = theta3(pspec.ring, v_name, zeta)
    return base * tnum * tden.inverse()


def shift_mixed_moment_bruteforce(pspec: ProcessSpec, r: int, v_name: str,
                                  zeta, depth: int) -> TruncSeries:
    """Configuration sum over (lambda, mu, charge) with energy grading.

    The charge n contributes u^(n^2/2) zeta^n t^(-r n) through u = v^2 and
    rational zeta; the partition part reuses the N=1 graded enumeration.
    """
    if pspec.N != 1:
        raise ValueError("shift-mixed quantities are single-step")
    ring = pspec.ring
    dv = ring.degrees[ring._index[v_name]]
    num = ring.zero()
    den = ring.zero()
    obs: dict = {}
    charge_num = ring.zero()
    charge_den = ring.zero()
    n = 0
    while n * n * dv <= ring.cutoff:
        for s in ((1,) if n == 0 else (1, -1)):
            m = s * n
            mono = ring.monomial(zeta**m, **{v_name: n * n})
            charge_den = charge_den + mono
            charge_num = charge_num + mono * (pspec.t ** (-r * m))
        n += 1
    for lam_seq, mu_seq in configurations(pspec, depth):
        w = weight_W(pspec, lam_seq, mu_seq)
        if not w:
            continue
        lam = lam_seq[0]
        v = obs.get(lam)
        if v is None:
            v = observable("E", r, lam, pspec.q, pspec.t)
            obs[lam] = v
        den = den + w
        num = num + w * v
    num = num * charge_num
    den = den * charge_den
    return (num.truncate(ring.cutoff) * den.truncate(ring.cutoff).inverse())


# ---------------------------------------------------------------------------
# Schur-limit kernels and the theta Cauchy determinant
# ---------------------------------------------------------------------------


def _theta_cauchy_entry(ring, v_name, u_mono, x, y, zeta) -> TruncSeries:
    """1/(x-y) theta_3(zeta y/x; u)/theta_3(zeta; u)
    (u;u)^2/((u x/y; u)(u y/x; u)) at rational x, y."""
    c = Fraction(1) / (x - y)
    th = theta3(ring, v_name, zeta * y / x) * theta3(ring, v_name, zeta).inverse()
    uu = qpochhammer(ring, u_mono, [u_mono])
    mixed = qpochhammer(ring, u_mono * (x / y), [u_mono]) \
        * qpochhammer(ring, u_mono * (y / x), [u_mono])
    return th * uu * uu * mixed.inverse() * c


def theta_cauchy_check(r: int, v_cutoff: int, xs, ys, zeta, label="") -> dict:
    """Both sides of the theta-deformed Cauchy determinant identity.

    LHS: Vandermonde ratio times the charge theta ratio times the cross
    Pochhammer products; RHS: determinant of the two-point entries.  All
    variables are exact rationals, both sides are series in v with u = v^2.
    """
    ring = SeriesRing([("v", 1)], v_cutoff)
    u = ring.monomial(Fraction(1), v=2)
    num = Fraction(1)
    for i in range(r):
        for j in range(r):
            if i < j:
                num *= (xs[i] - xs[j])
            if i > j:
                num *= (ys[i] - ys[j])
    den = Fraction(1)
    ratio = Fraction(1)
    for i in range(r):
        ratio *= ys[i] / xs[i]
        for j in range(r):
            den *= (xs[i] - ys[j])
    lhs = ring.scalar(num / den)
    lhs = lhs * theta3(ring, "v", zeta * ratio) * theta3(ring, "v", zeta).inverse()
    for i in range(r):
        for j in range(r):
            lhs = lhs * qpochhammer(ring, u * (xs[i] / xs[j]), [u])
            lhs = lhs * qpochhammer(ring, u * (ys[i] / ys[j]), [u])
            lhs = lhs * qpochhammer(ring, u * (xs[i] / ys[j]), [u]).inverse()
            lhs = lhs * qpochhammer(ring, u * (ys[i] / xs[j]), [u]).inverse()
    entries = [[_theta_cauchy_entry(ring, "v", u, xs[i], ys[j], zeta)
                for j in range(r)] for i in range(r)]
    rhs = _det_series(entries, ring)
    return {"label": label, "match": lhs == rhs, "lhs": lhs, "rhs": rhs}


def _det_series(entries, ring) -> TruncSeries:
    r = len(entries)
    if r == 1:
        return entries[0][0]
    out = ring.zero()
    from itertools import permutations
    for perm in permutations(range(r)):
        sign = 1
        seen = list(perm)
        # count inversions for the signature
        inv = sum(1 for i in range(r) for j in range(i + 1, r) if seen[i] > seen[j])
        sign = -1 if inv % 2 else 1
        term = ring.one()
        for i in range(r):
            term = term * entries[i][perm[i]]
        out = out + term * Fraction(sign)
    return out


def schur_limit_kernels(r: int, v_cutoff: int, rng) -> dict:
    """Verification bundle for the charged Schur-limit determinants.

    (a) the theta Cauchy determinant identity at generic rational points;
    (b) the same identity at x_i = z_i, y_j = t^{-1} z_j, which is exactly
        the statement that the shift-mixed moment integrand collapses to a
        single determinant at q = t;
    (c) the u -> 0 constant term, the classical Cauchy determinant.
    """
    from .scalars import random_rational

    def distinct_rationals(k):
        vals = []
        while len(vals) < k:
            c = random_rational(rng)
            if all(c != v for v in vals):
                vals.append(c)
        return vals

    zeta = random_rational(rng)
    t = random_rational(rng)
    xs = distinct_rationals(r)
    ys = [x * random_rational(rng) for x in xs]
    while any(x == y for x in xs for y in ys):
        ys = [x * random_rational(rng) for x in xs]
    generic = theta_cauchy_check(r, v_cutoff, xs, ys, zeta, label="generic points")
    zs = distinct_rationals(r)
    kernel = theta_cauchy_check(r, v_cutoff, zs, [z / t for z in zs], zeta,
                                label="kernel substitution y = z/t")
    u0 = {"label": "u -> 0 Cauchy determinant",
          "match": generic["lhs"].subs_zero("v").constant_term()
          == generic["rhs"].subs_zero("v").constant_term()}
    return {"r": r, "checks": [generic, kernel, u0],
            "match": all(c["match"] for c in [generic, kernel, u0])}


# ---------------------------------------------------------------------------
# Analytic-regime validation (inequalities only; no numeric integration)
# ---------------------------------------------------------------------------


def analytic_regime_check(series: str, alphas_plus, alphas_minus, u: Fraction,
                          r: int, q: Fraction, t: Fraction) -> dict:
    """Contour-existence inequalities for the first two observable families.

    Inputs are the leading finite-alpha values (nonincreasing, nonnegative);
    zero specializations pass vacuously.  No integration is performed.
    """
    a_plus = max(alphas_plus) if alphas_plus else Fraction(0)
    a_minus = max(alphas_minus) if alphas_minus else Fraction(0)
    if series == "E":
        conds = {
            "alpha_plus_max < 1": a_plus < 1,
            f"alpha_minus_max < t^{r}": a_minus < t**r,
            f"u < t^{r}": u < t**r,
        }
    elif series == "E'":
        conds = {
            "alpha_plus_max < q": a_plus < q,
            "alpha_minus_max < 1": a_minus < 1,
            "u < q": u < q,
        }
    else:
        raise ValueError("contour conditions are stated only for E and E'")
    return {"series": series, "r": r, "conditions": conds,
            "pass": all(conds.values())}
