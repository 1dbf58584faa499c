"""Fock representation of the (q,t)-Heisenberg algebra.

Vectors are sparse maps from partitions to coefficients in the power-sum
basis: the basis ket labelled by lambda is a_{-lambda_1} ... a_{-lambda_l}
applied to the vacuum, and the pairing of two basis kets is z_lambda(q,t).
Coefficients may be scalars, truncated series, or Laurent polynomials; all
operators below are generic over that arithmetic.

The module also hosts vertex operators V(gamma) = exp(sum gamma_{-n} a_{-n}/n)
exp(sum gamma_n a_n / n), their normal-ordered products and traces, the
free-field realizations of the four diagonal operator families, and the
charged extension with its bosonized fermion fields.
"""

from __future__ import annotations

from fractions import Fraction

from .laurent import (
    LaurentPoly,
    cauchy_sym_prefactor,
    product_coefficient,
    ratio_sym_factor,
)
from .partitions import make_partition, multiplicity, weight, z_qt
from .scalars import rho_root
from .series import SeriesRing, TruncSeries, qpochhammer, theta3


# ---------------------------------------------------------------------------
# Bare Fock vectors
# ---------------------------------------------------------------------------


def fock_add(u: dict, v: dict) -> dict:
    out = dict(u)
    for lam, c in v.items():
        w = out.get(lam)
        w = c if w is None else w + c
        if w:
            out[lam] = w
        else:
            out.pop(lam, None)
    return out


def fock_scale(v: dict, c) -> dict:
    out = {}
    for lam, a in v.items():
        b = a * c
        if b:
            out[lam] = b
    return out


def heisenberg_apply(n: int, v: dict, q: Fraction, t: Fraction) -> dict:
    """Action of the mode a_n (n != 0) on a Fock vector."""
    if n == 0:
        raise ValueError("mode index must be nonzero")
    out = {}
    if n < 0:
        k = -n
        for lam, c in v.items():
            mu = make_partition(sorted(lam + (k,), reverse=True))
            w = out.get(mu)
            w = c if w is None else w + c
            if w:
                out[mu] = w
            else:
                out.pop(mu, None)
        return out
    # positive mode: remove one part equal to n per occurrence, with the
    # commutator weight n (1-q^n)/(1-t^n)
    comm = n * (1 - q**n) / (1 - t**n)
    for lam, c in v.items():
        m = multiplicity(lam, n)
        if m == 0:
            continue
        ls = list(lam)
        ls.remove(n)
        mu = make_partition(ls)
        add = c * (comm * m)
        w = out.get(mu)
        w = add if w is None else w + add
        if w:
            out[mu] = w
        else:
            out.pop(mu, None)
    return out


def fock_to_json(v: dict) -> dict:
    """Debug dump: partition (as an int list rendered "a,b,c") -> coefficient."""
    from .scalars import as_fraction, format_rational

    return {",".join(map(str, lam)): format_rational(as_fraction(c))
            for lam, c in sorted(v.items())}


def pair(bra: dict, ket: dict, q: Fraction, t: Fraction):
    """Bilinear pairing with <lambda|mu> = z_lambda(q,t) delta."""
    acc = None
    for lam, c in bra.items():
        d = ket.get(lam)
        if d is None:
            continue
        term = c * d * z_qt(lam, q, t)
        acc = term if acc is None else acc + term
    return acc if acc is not None else Fraction(0)


# ---------------------------------------------------------------------------
# Vertex operators
# ---------------------------------------------------------------------------


class VertexSpec:
    """Finitely many vertex modes: gamma_plus[n] and gamma_minus[n], n >= 1."""

    def __init__(self, gamma_plus: dict, gamma_minus: dict):
        self.plus = {n: c for n, c in gamma_plus.items() if c}
        self.minus = {n: c for n, c in gamma_minus.items() if c}

    def merge(self, other: "VertexSpec") -> "VertexSpec":
        plus = dict(self.plus)
        for n, c in other.plus.items():
            plus[n] = plus.get(n, 0) + c
        minus = dict(self.minus)
        for n, c in other.minus.items():
            minus[n] = minus.get(n, 0) + c
        return VertexSpec(plus, minus)


def _lowering_apply(modes: dict, v: dict, q, t) -> dict:
    """exp(sum_n modes[n] a_n / n) v; terminates because degrees drop."""
    total = dict(v)
    layer = v
    k = 1
    while layer:
        nxt: dict = {}
        for n, g in modes.items():
            if not g:
                continue
            moved = heisenberg_apply(n, layer, q, t)
            for lam, c in moved.items():
                add = c * g * Fraction(1, n)
                w = nxt.get(lam)
                w = add if w is None else w + add
                if w:
                    nxt[lam] = w
                else:
                    nxt.pop(lam, None)
        layer = fock_scale(nxt, Fraction(1, k))
        total = fock_add(total, layer)
        k += 1
    return total


def _raising_apply(modes: dict, v: dict, q, t, degree_cap: int) -> dict:
    """exp(sum_n modes[n] a_{-n} / n) v, dropping grades above degree_cap."""
    total = dict(v)
    layer = v
    k = 1
    while layer:
        nxt: dict = {}
        for n, g in modes.items():
            if not g:
                continue
            for lam, c in layer.items():
                if weight(lam) + n > degree_cap:
                    continue
                mu = make_partition(sorted(lam + (n,), reverse=True))
                add = c * g * Fraction(1, n)
                w = nxt.get(mu)
                w = add if w is None else w + add
                if w:
                    nxt[mu] = w
                else:
                    nxt.pop(mu, None)
        layer = fock_scale(nxt, Fraction(1, k))
        total = fock_add(total, layer)
        k += 1
    return total


def vertex_apply(spec: VertexSpec, v: dict, q, t, degree_cap: int) -> dict:
    """V(gamma) v truncated to grades <= degree_cap.

    When composing several vertex operators the cap must leave headroom for
    excursions above the target grade: with coefficients graded so that
    raising by k costs series degree k, a cap of (max grade of v) + (ring
    cutoff) is lossless, because anything higher carries a dead coefficient.
    """
    if degree_cap is None:
        raise ValueError("vertex_apply needs a degree cap")
    lowered = _lowering_apply(spec.plus, v, q, t)
    return _raising_apply(spec.minus, lowered, q, t, degree_cap)


def gamma_spec(ring: SeriesRing, q, t, spec_p_values, sign: str) -> VertexSpec:
    """Gamma(X)_+ or Gamma(X)_- for a specialization's power-sum values.

    Modes are (1-t^n)/(1-q^n) p_n(X); ``spec_p_values(n)`` supplies p_n.
    """
    nmax = ring.cutoff if ring.cutoff > 0 else 0
    modes = {}
    for n in range(1, nmax + 1):
        pv = spec_p_values(n)
        if not pv:
            continue
        modes[n] = pv * ((1 - t**n) / (1 - q**n))
    if sign == "+":
        return VertexSpec(modes, {})
    if sign == "-":
        return VertexSpec({}, modes)
    raise ValueError("sign must be '+' or '-'")


def ope_reorder(a: VertexSpec, b: VertexSpec, q, t, one):
    """Rewrite V(a) V(b) = scalar * :V(a) V(b):.

    ``one`` is the multiplicative unit of the coefficient arithmetic (so the
    scalar is built in the right ring).  The scalar is
    exp(sum_n (1-q^n)/(1-t^n) a_n b_{-n} / n) evaluated by the coefficient
    ring's own exp.
    """
    cross = None
    for n, ga in a.plus.items():
        gb = b.minus.get(n)
        if gb is None:
            continue
        term = ga * gb * ((1 - q**n) / (1 - t**n) * Fraction(1, n))
        cross = term if cross is None else cross + term
    if cross is None:
        scalar = one
    else:
        scalar = cross.exp() if hasattr(cross, "exp") else None
        if scalar is None:
            raise ValueError("OPE scalar requires graded coefficients")
    return scalar, a.merge(b)


def trace_bruteforce(op, ring: SeriesRing, u_name: str, depth: int, q, t) -> TruncSeries:
    """Graded trace sum_{|lam| <= depth} u^{|lam|} <lam| op |lam> / z_lam.

    ``op`` maps Fock vectors to Fock vectors; the lambda-diagonal coefficient
    is read off directly in the power-sum basis.
    """
    from .partitions import partitions_up_to

    out = ring.zero()
    for lam in partitions_up_to(depth):
        image = op({lam: ring.one()})
        diag = image.get(lam)
        if not diag:
            continue
        out = out + ring.monomial(Fraction(1), **{u_name: weight(lam)}) * diag
    return out


def trace_closed(spec: VertexSpec, ring: SeriesRing, u_name: str, q, t) -> TruncSeries:
    """Closed form of Tr(u^D V(gamma)): Euler factor times an exponential.

    The exponent carries u^n/(1-u^n) gamma_{-n} gamma_n (1-q^n)/((1-t^n) n),
    with the u geometric factor expanded inside the ring.
    """
    u = ring.gen(u_name)
    euler = qpochhammer(ring, u, [u]).inverse()
    expo = ring.zero()
    for n in range(1, ring.cutoff + 1):
        gm = spec.minus.get(n)
        gp = spec.plus.get(n)
        if not gm or not gp:
            continue
        geom = ring.zero()  # u^n / (1 - u^n) = sum_{j>=1} u^(n j)
        j = 1
        while True:
            mono = ring.monomial(Fraction(1), **{u_name: n * j})
            if not mono:
                break
            geom = geom + mono
            j += 1
        expo = expo + gm * gp * geom * ((1 - q**n) / (1 - t**n) * Fraction(1, n))
    return euler * expo.exp()


# ---------------------------------------------------------------------------
# Free-field realizations of the diagonal operator families
# ---------------------------------------------------------------------------

# family tag -> (vertex kind, Cauchy pole shift c, scalar prefactor c0(r))
#   E  : eta,  c = t^{-1}, prefactor t^{-r}
#   E' : xi,   c = t,      prefactor t^{r}
#   G  : eta,  c = q,      prefactor (-1)^r
#   G' : xi,   c = q^{-1}, prefactor (-1)^r

FREE_FIELD_FAMILIES = ("E", "E'", "G", "G'")


def _family_data(family: str, q: Fraction, t: Fraction):
    if family == "E":
        return "eta", Fraction(1) / t, Fraction(1) / t
    if family == "E'":
        return "xi", t, t
    if family == "G":
        return "eta", q, Fraction(-1)
    if family == "G'":
        return "xi", Fraction(1) / q, Fraction(-1)
    raise ValueError(f"unknown operator family {family!r}")


def _eta_xi_modes(kind: str, zvars, ring, q, t, index: int, nmax: int):
    """Mode coefficients of eta(z_index) or xi(z_index) as Laurent monomials."""
    rho = rho_root(t / q)  # only used by xi
    plus, minus = {}, {}
    for n in range(1, nmax + 1):
        if kind == "eta":
            cminus = 1 - t**-n
            cplus = -(1 - t**n)
        else:
            rn = rho**n
            cminus = -(1 - t**-n) * rn
            cplus = (1 - t**n) * rn
        minus[n] = LaurentPoly.monomial(zvars, ring, cminus, {zvars[index]: n})
        plus[n] = LaurentPoly.monomial(zvars, ring, cplus, {zvars[index]: -n})
    return plus, minus


def free_field_apply(family: str, r: int, v: dict, q: Fraction, t: Fraction,
                     ring: SeriesRing = None, clip: int = None) -> dict:
    """Apply the family operator (E_r, E'_r, G_r or G'_r hat) to a Fock vector.

    The Cauchy determinant det(1/(z_i - c z_j)) is replaced by its symmetrized
    product form before expansion, so the ill-defined diagonal entries never
    appear; the constant term in all z variables is then extracted exactly.
    """
    if ring is None:
        ring = SeriesRing([], 0)
    if not v:
        return {}
    kind, c, c0 = _family_data(family, q, t)
    prefactor = c0**r * cauchy_sym_prefactor(c, r)
    zvars = tuple(f"z{i}" for i in range(1, r + 1))
    gmax = max(weight(lam) for lam in v)
    if clip is None:
        clip = r * gmax + 2
    nmax = gmax if gmax > 0 else 0

    plus_modes: dict = {}
    minus_modes: dict = {}
    for i in range(r):
        p, m = _eta_xi_modes(kind, zvars, ring, q, t, i, nmax)
        for n in range(1, nmax + 1):
            plus_modes[n] = plus_modes.get(n, LaurentPoly(zvars, ring, {})) + p[n]
            minus_modes[n] = minus_modes.get(n, LaurentPoly(zvars, ring, {})) + m[n]

    sym_factors = [ratio_sym_factor(zvars, ring, i, j, c, clip)
                   for i in range(r) for j in range(i + 1, r)]

    out: dict = {}
    for lam, coeff in v.items():
        g = weight(lam)
        start = {lam: LaurentPoly.constant(zvars, ring.one())}
        lowered = _lowering_apply(plus_modes, start, q, t)
        image = _raising_apply(minus_modes, lowered, q, t, g)
        for mu, lp in image.items():
            if weight(mu) != g:
                continue  # z balance forces degree preservation
            val = product_coefficient(sym_factors + [lp], (0,) * r)
            if not val:
                continue
            add = coeff * (val.constant_term() if not ring.symbols else val)
            add = add * prefactor
            w = out.get(mu)
            w = add if w is None else w + add
            if w:
                out[mu] = w
            else:
                out.pop(mu, None)
    return out


# ---------------------------------------------------------------------------
# Charged Fock space
# ---------------------------------------------------------------------------


def charged_scale_charge(v: dict, f) -> dict:
    """Multiply each (lam, n) component by the scalar f(n)."""
    out = {}
    for (lam, n), c in v.items():
        w = c * f(n)
        if w:
            out[(lam, n)] = w
    return out


def charge_shift(v: dict, dn: int) -> dict:
    """Action of e^{dn * alpha}: shift all charges by dn."""
    return {(lam, n + dn): c for (lam, n), c in v.items()}


def charge_op(v: dict) -> dict:
    """Charge operator a_0: eigenvalue n on charge-n components."""
    return {(lam, n): c * n for (lam, n), c in v.items() if c * n}


def energy_of(lam: tuple, n: int) -> Fraction:
    """Energy |lam| + n^2/2 of a charged basis vector."""
    return Fraction(weight(lam)) + Fraction(n * n, 2)


def fermion_apply(starred: bool, zvar: str, v: dict, ring: SeriesRing,
                  zvars: tuple, q, t, grade_cap: int) -> dict:
    """Apply psi(z) (starred=False) or psi*(z) (starred=True) at q = t.

    The fields are realized bosonically: psi(z) = e^{-alpha} z^{-a_0} B(z),
    psi*(z) = e^{alpha} z^{a_0} B(z)^{-1}-type, with undeformed Heisenberg
    modes.  Components whose partition grade exceeds grade_cap are dropped;
    z powers land in the LaurentPoly coefficients.
    """
    if q != t:
        raise ValueError("fermion fields are available only at q = t")
    iz = zvars.index(zvar)
    sgn = -1 if not starred else 1
    nmax = grade_cap
    plus, minus = {}, {}
    for n in range(1, nmax + 1):
        # psi: gamma_{-n} = z^n, gamma_n = -z^{-n}; psi*: opposite signs
        minus[n] = LaurentPoly.monomial(zvars, ring, Fraction(-sgn), {zvar: n})
        plus[n] = LaurentPoly.monomial(zvars, ring, Fraction(sgn), {zvar: -n})
    out: dict = {}
    for (lam, n), coeff in v.items():
        start = {lam: coeff}
        lowered = _lowering_apply(plus, start, q, t)
        raised = _raising_apply(minus, lowered, q, t, grade_cap)
        # z^{-sgn... }: for psi the factor z^{-a_0} contributes z^{-n} on
        # charge n; for psi* it is z^{+n}.  Charge then shifts by sgn.
        zpow = LaurentPoly.monomial(zvars, ring, Fraction(1), {zvar: sgn * n})
        for mu, lp in raised.items():
            add = lp * zpow
            key = (mu, n + sgn)
            w = out.get(key)
            w = add if w is None else w + add
            if w:
                out[key] = w
            else:
                out.pop(key, None)
    return out


def fermion_pair_ope(zvars, ring, xvar: str, shift: Fraction, nmax: int):
    """Normal-ordered form of psi(x) psi*(y) at y = shift * x (q = t).

    Returns (coeff_poly, charge_power, spec): the operator equals
    coeff_poly * shift^{a_0} * V(spec) with coeff_poly = x^{-1}/(1 - shift),
    the divergent diagonal geometric series summed in closed form before any
    expansion.  The vertex modes are gamma_{-n} = (1 - shift^n) x^n and
    gamma_n = -(1 - shift^{-n}) x^{-n}.
    """
    if shift == 1:
        raise ZeroDivisionError("coincident fermion arguments")
    coeff = LaurentPoly.monomial(zvars, ring, Fraction(1) / (1 - shift),
                                 {xvar: -1})
    plus, minus = {}, {}
    for n in range(1, nmax + 1):
        minus[n] = LaurentPoly.monomial(zvars, ring, 1 - shift**n, {xvar: n})
        plus[n] = LaurentPoly.monomial(zvars, ring, -(1 - shift**-n),
                                       {xvar: -n})
    return coeff, VertexSpec(plus, minus)


def fermion_bilinear_apply(cvec: dict, t: Fraction, ring: SeriesRing,
                           clip: int = None) -> dict:
    """The r = 1 fermion bilinear Int Dz psi(z) psi*(z/t) at q = t.

    Normal-orders the pair through the charged OPE (closed-form scalar), then
    applies the resulting vertex operator per charge sector, weights by
    t^{-a_0}, and extracts the z constant term.
    """
    zvars = ("z",)
    shift = Fraction(1) / t
    gmax = max((weight(lam) for (lam, _n) in cvec), default=0)
    coeff, spec = fermion_pair_ope(zvars, ring, "z", shift, gmax)
    out: dict = {}
    for (lam, n), amp in cvec.items():
        g = weight(lam)
        start = {lam: LaurentPoly.constant(zvars, ring.one())}
        lowered = _lowering_apply(spec.plus, start, t, t)
        image = _raising_apply(spec.minus, lowered, t, t, g)
        for mu, lp in image.items():
            if weight(mu) != g:
                continue
            # Int Dz takes the z^{-1} coefficient; coeff carries the z^{-1}
            val = (lp * coeff).terms.get((-1,))
            if not val:
                continue
            add = amp * val * (shift**n)
            key = (mu, n)
            w = out.get(key)
            w = add if w is None else w + add
            if w:
                out[key] = w
            else:
                out.pop(key, None)
    return out


def extended_E_apply(r: int, cvec: dict, q: Fraction, t: Fraction) -> dict:
    """t^{-r a_0} O(E_r) on the charged space, O(E_r) = t^r E_r hat."""
    out: dict = {}
    by_charge: dict = {}
    for (lam, n), c in cvec.items():
        by_charge.setdefault(n, {})[lam] = c
    for n, v in by_charge.items():
        image = free_field_apply("E", r, v, q, t)
        for mu, c in image.items():
            add = c * (t**r) * (t ** (-r * n))
            key = (mu, n)
            w = out.get(key)
            w = add if w is None else w + add
            if w:
                out[key] = w
            else:
                out.pop(key, None)
    return out


def two_point_fermion_trace(v_cutoff: int, window: int, zeta: Fraction,
                            t: Fraction) -> dict:
    """<psi(x) psi*(y)> under the u^H zeta^{a_0} weight, two ways (q = t).

    Brute force sums diagonal matrix elements over charged states with
    2|lam| + n^2 <= v_cutoff, coefficients Laurent in (x, y) on the window
    |exponent| <= window.  The closed form is
    (x - y)^{-1} theta(zeta y/x) / theta(zeta) (u;u)^2 / ((ux/y;u)(uy/x;u))
    with (x - y)^{-1} expanded in positive powers of y/x.  Returns both.
    """
    from math import isqrt

    from .partitions import partitions_up_to

    ring = SeriesRing([("v", 1)], v_cutoff)
    zvars = ("x", "y")
    one = LaurentPoly.constant(zvars, ring.one())

    def op(cv):
        nmaxch = isqrt(v_cutoff) + 1
        cap = max(weight(lam) for (lam, _n) in cv) + window + nmaxch
        stage = fermion_apply(True, "y", cv, ring, zvars, t, t, cap)
        return fermion_apply(False, "x", stage, ring, zvars, t, t, cap)

    num = None
    den = ring.zero()
    nmax = isqrt(v_cutoff)
    for n in range(-nmax, nmax + 1):
        rest = v_cutoff - n * n
        if rest < 0:
            continue
        for lam in partitions_up_to(rest // 2):
            e2 = 2 * weight(lam) + n * n
            if e2 > v_cutoff:
                continue
            wgt = ring.monomial(zeta**n, v=e2)
            den = den + wgt
            image = op({(lam, n): one})
            diag = image.get((lam, n))
            if not diag:
                continue
            term = diag * wgt
            num = term if num is None else num + term
    brute = num.map_coeffs(lambda c: c * den.inverse())
    # prune outside the comparison window
    brute = LaurentPoly(zvars, ring, {
        e: c for e, c in brute.terms.items() if max(abs(x) for x in e) <= window})

    u = ring.monomial(Fraction(1), v=2)
    theta_den = theta3(ring, "v", zeta).inverse()
    closed = LaurentPoly(zvars, ring, {})
    euler2 = qpochhammer(ring, u, [u]) ** 2
    # assemble (x-y)^{-1} * theta(zeta y/x) * (u x/y; u)^{-1} (u y/x; u)^{-1}
    geom = LaurentPoly(zvars, ring, {
        (-1 - k, k): ring.one() for k in range(2 * window + 2)})
    th = theta3_ratio_laurent(ring, zvars, "v", zeta, window)
    pochs = _ratio_pochhammer_pair(ring, zvars, u, window)
    closed = geom * th * pochs
    closed = closed.map_coeffs(lambda c: c * theta_den * euler2)
    closed = LaurentPoly(zvars, ring, {
        e: c for e, c in closed.terms.items() if max(abs(x) for x in e) <= window})
    return {"brute": brute, "closed": closed, "match": brute == closed}


def theta3_ratio_laurent(ring, zvars, v: str, zeta, window: int) -> LaurentPoly:
    """theta_3(zeta y/x; u) as a Laurent polynomial in the ratio y/x."""
    terms = {}
    n = 0
    while n * n <= ring.cutoff:
        for s in ((1,) if n == 0 else (1, -1)):
            m = s * n
            if abs(m) > 2 * window + 1:
                continue
            mono = ring.monomial(zeta**m, **{v: n * n})
            if mono:
                terms[(-m, m)] = mono
        n += 1
    return LaurentPoly(zvars, ring, terms)


def _ratio_pochhammer_pair(ring, zvars, u, window: int) -> LaurentPoly:
    """1 / ((u x/y; u)_inf (u y/x; u)_inf) expanded on the ratio window."""
    from .laurent import laurent_exp

    arg = LaurentPoly(zvars, ring, {})
    for n in range(1, ring.cutoff + 1):
        geom = ring.zero()  # u^n/(1-u^n) = sum_{j>=1} u^{n j}
        j = 1
        while True:
            mono = u ** (n * j)
            if not mono:
                break
            geom = geom + mono
            j += 1
        c = geom * Fraction(1, n)
        if not c:
            continue
        arg = arg + LaurentPoly(zvars, ring, {(n, -n): c, (-n, n): c})
    return laurent_exp(arg, 2 * window + 2)


def charged_diagonal_trace(op, unit, state_weight, energy_cap2: int):
    """Weighted diagonal trace over the charged space.

    Sums state_weight(lam, n) * <(lam,n) diagonal of op applied to the basis
    state>, over states with doubled energy 2|lam| + n^2 <= energy_cap2.
    ``unit`` is the coefficient one in the caller's arithmetic; z_lambda
    normalizations cancel because the diagonal is read in the same basis.
    """
    from math import isqrt

    from .partitions import partitions_up_to

    out = None
    nmax = isqrt(energy_cap2)
    for n in range(-nmax, nmax + 1):
        rest = energy_cap2 - n * n
        if rest < 0:
            continue
        for lam in partitions_up_to(rest // 2):
            image = op({(lam, n): unit})
            diag = image.get((lam, n))
            if not diag:
                continue
            term = diag * state_weight(lam, n)
            out = term if out is None else out + term
    return out
