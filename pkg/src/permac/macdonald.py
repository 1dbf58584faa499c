"""Macdonald symmetric functions with exact coefficients at rational (q, t).

Symmetric functions are sparse maps from partitions to coefficients, in
either the power-sum basis ("p") or the monomial basis ("m").  The
one-parameter family P_lambda is produced weight by weight through
Gram-Schmidt against dominance order in the m basis, with the pairing
evaluated through exact p/m transition matrices.  Pieri coefficients come
from the arm/leg products, independently of the orthogonalization; the two
routes cross-check each other in the test suite.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from . import fock
from .partitions import (
    arm_leg,
    cells,
    contains,
    dominance_key,
    horizontal_strip,
    length,
    make_partition,
    multiplicity,
    partitions_of,
    weight,
    z_qt,
)


class GramSingularError(ArithmeticError):
    """Gram matrix degenerated at the chosen (q, t) point."""


# ---------------------------------------------------------------------------
# p <-> m transitions (parameter-free, cached by weight)
# ---------------------------------------------------------------------------


def _multiply_m_by_p(mrep: dict, r: int) -> dict:
    """Multiply an m-basis expansion by the power sum p_r."""
    out: dict = {}
    for mu, c in mrep.items():
        choices = {0}
        choices.update(mu)
        for v in choices:
            parts = list(mu)
            if v:
                parts.remove(v)
            parts.append(v + r)
            kappa = make_partition(sorted(parts, reverse=True))
            mult = multiplicity(kappa, v + r)
            out[kappa] = out.get(kappa, 0) + c * mult
    return {k: v for k, v in out.items() if v}


@lru_cache(maxsize=None)
def p_to_m(n: int) -> dict:
    """m-basis expansions of all p_lambda with |lambda| = n (integer coeffs)."""
    out = {}
    for lam in partitions_of(n):
        rep = {(): 1}
        for r in lam:
            rep = _multiply_m_by_p(rep, r)
        out[lam] = rep
    return out


@lru_cache(maxsize=None)
def m_to_p(n: int) -> dict:
    """p-basis expansions of all m_lambda with |lambda| = n (rational coeffs)."""
    lams = list(partitions_of(n))
    idx = {lam: i for i, lam in enumerate(lams)}
    size = len(lams)
    # rows: p_lam in m-coordinates
    mat = [[Fraction(p_to_m(n)[lam].get(mu, 0)) for mu in lams] for lam in lams]
    inv = _invert(mat)
    out = {}
    for j, mu in enumerate(lams):
        out[mu] = {lams[i]: inv[j][i] for i in range(size) if inv[j][i]}
    return out


def _invert(mat):
    n = len(mat)
    aug = [row[:] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise GramSingularError("singular transition matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = Fraction(1) / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def m_dict_to_p(f: dict) -> dict:
    """Convert an m-basis map (possibly mixed weights) to the p basis."""
    out: dict = {}
    for mu, c in f.items():
        for lam, a in m_to_p(weight(mu))[mu].items():
            v = out.get(lam, 0) + c * a
            if v:
                out[lam] = v
            else:
                out.pop(lam, None)
    return out


def p_dict_to_m(f: dict) -> dict:
    out: dict = {}
    for lam, c in f.items():
        for mu, a in p_to_m(weight(lam))[lam].items():
            v = out.get(mu, 0) + c * a
            if v:
                out[mu] = v
            else:
                out.pop(mu, None)
    return out


# ---------------------------------------------------------------------------
# the (q,t) pairing and Gram-Schmidt
# ---------------------------------------------------------------------------


def inner_product_p(lam: tuple, mu: tuple, q: Fraction, t: Fraction) -> Fraction:
    """<p_lam, p_mu> = z_lam(q,t) delta_{lam,mu}."""
    if lam != mu:
        return Fraction(0)
    return z_qt(lam, q, t)


def inner_product(f_p: dict, g_p: dict, q: Fraction, t: Fraction):
    """Pairing of two p-basis maps."""
    acc = Fraction(0)
    for lam, c in f_p.items():
        d = g_p.get(lam)
        if d:
            acc += c * d * z_qt(lam, q, t)
    return acc


_P_TABLE_CACHE: dict = {}


def _lam_key(lam: tuple) -> str:
    return ",".join(map(str, lam))


def _lam_unkey(s: str) -> tuple:
    return make_partition(int(x) for x in s.split(",") if x)


def _table_to_disk(q, t, n, table) -> dict:
    from .scalars import format_rational

    def pack(side):
        return {_lam_key(lam): {_lam_key(mu): format_rational(c)
                                for mu, c in mrep.items()}
                for lam, mrep in table[side].items()}

    return {"q": format_rational(q), "t": format_rational(t), "weight": n,
            "P": pack("P"), "Q": pack("Q"),
            "norm": {_lam_key(lam): format_rational(v)
                     for lam, v in table["norm"].items()}}


def _table_from_disk(data) -> dict:
    from .scalars import parse_rational

    def unpack(side):
        return {_lam_unkey(lk): {_lam_unkey(mk): parse_rational(c)
                                 for mk, c in mrep.items()}
                for lk, mrep in data[side].items()}

    return {"P": unpack("P"), "Q": unpack("Q"),
            "norm": {_lam_unkey(lk): parse_rational(v)
                     for lk, v in data["norm"].items()}}


def macdonald_table(q: Fraction, t: Fraction, n: int) -> dict:
    """P and Q expansions for weight n at the point (q, t).

    Returns {"P": {lam: m-dict}, "Q": {lam: m-dict}, "norm": {lam: Fraction}}.
    Gram-Schmidt runs over a linear extension of dominance order from the
    least dominant partition up; unitriangularity of the result is a theorem
    and is asserted by the test suite rather than forced here.  Tables are
    memoized per (q, t, weight) and optionally persisted through the disk
    cache.
    """
    from . import cache
    from .scalars import format_rational

    key = (q, t, n)
    hit = _P_TABLE_CACHE.get(key)
    if hit is not None:
        return hit
    params = {"q": format_rational(q), "t": format_rational(t), "weight": n}
    disk = cache.load("macdonald", "pq-table", params)
    if disk is not None:
        table = _table_from_disk(disk)
        _P_TABLE_CACHE[key] = table
        return table
    lams = sorted(partitions_of(n), key=dominance_key)
    pcoords = {lam: m_dict_to_p({lam: Fraction(1)}) for lam in lams}
    P: dict = {}
    Pp: dict = {}
    norms: dict = {}
    for lam in lams:
        cur = {lam: Fraction(1)}
        cur_p = dict(pcoords[lam])
        for mu in P:
            c = inner_product(pcoords[lam], Pp[mu], q, t)
            if not c:
                continue
            f = c / norms[mu]
            for k, v in P[mu].items():
                w = cur.get(k, 0) - f * v
                if w:
                    cur[k] = w
                else:
                    cur.pop(k, None)
            for k, v in Pp[mu].items():
                w = cur_p.get(k, 0) - f * v
                if w:
                    cur_p[k] = w
                else:
                    cur_p.pop(k, None)
        nrm = inner_product(cur_p, cur_p, q, t)
        if not nrm:
            raise GramSingularError(f"vanishing norm at (q,t)=({q},{t}), weight {n}")
        P[lam] = cur
        Pp[lam] = cur_p
        norms[lam] = nrm
    table = {
        "P": P,
        "Q": {lam: {k: v / norms[lam] for k, v in P[lam].items()} for lam in lams},
        "norm": norms,
    }
    _P_TABLE_CACHE[key] = table
    cache.store("macdonald", "pq-table", params, _table_to_disk(q, t, n, table))
    return table


def macdonald_P(lam: tuple, q: Fraction, t: Fraction) -> dict:
    """P_lambda in the m basis."""
    return macdonald_table(q, t, weight(lam))["P"][lam]


def macdonald_Q(lam: tuple, q: Fraction, t: Fraction) -> dict:
    """Q_lambda in the m basis."""
    return macdonald_table(q, t, weight(lam))["Q"][lam]


def macdonald_P_p(lam: tuple, q: Fraction, t: Fraction) -> dict:
    """P_lambda in the p basis (the Fock-space incarnation of the ket)."""
    return m_dict_to_p(macdonald_P(lam, q, t))


def macdonald_Q_p(lam: tuple, q: Fraction, t: Fraction) -> dict:
    return m_dict_to_p(macdonald_Q(lam, q, t))


def g_row_p(r: int, q: Fraction, t: Fraction) -> dict:
    """The one-row dual function g_r = Q_(r) in the p basis.

    Classical expansion: g_r = sum_{|lam| = r} p_lam / z_lam(q,t); the
    equality with the Gram-Schmidt Q_(r) is covered by tests.
    """
    if r == 0:
        return {(): Fraction(1)}
    return {lam: Fraction(1) / z_qt(lam, q, t) for lam in partitions_of(r)}


# ---------------------------------------------------------------------------
# Pieri coefficients
# ---------------------------------------------------------------------------


def _b_factor(lam: tuple, cell, q: Fraction, t: Fraction) -> Fraction:
    i, j = cell
    if not (1 <= i <= len(lam) and 1 <= j <= lam[i - 1]):
        return Fraction(1)
    a, l = arm_leg(lam, cell)
    return (1 - q**a * t ** (l + 1)) / (1 - q ** (a + 1) * t**l)


def pieri(lam: tuple, mu: tuple, q: Fraction, t: Fraction):
    """(psi, phi) for a horizontal strip lam/mu.

    psi multiplies Q-expansions of Q_mu g_r, phi multiplies P-expansions of
    P_mu g_r; both are products of arm/leg b ratios over row/column cells of
    the strip.
    """
    if not horizontal_strip(lam, mu):
        raise ValueError(f"{lam}/{mu} is not a horizontal strip")
    strip = [(i, j) for (i, j) in cells(lam)
             if not (i <= len(mu) and j <= mu[i - 1])]
    rows = {i for (i, _) in strip}
    cols = {j for (_, j) in strip}
    psi = Fraction(1)
    phi = Fraction(1)
    for s in cells(lam):
        i, j = s
        if i in rows and j not in cols:
            psi *= _b_factor(mu, s, q, t) / _b_factor(lam, s, q, t)
        if j in cols:
            phi *= _b_factor(lam, s, q, t) / _b_factor(mu, s, q, t)
    return psi, phi


def pieri_psi(lam, mu, q, t) -> Fraction:
    return pieri(lam, mu, q, t)[0]


def pieri_phi(lam, mu, q, t) -> Fraction:
    return pieri(lam, mu, q, t)[1]


# ---------------------------------------------------------------------------
# Specializations
# ---------------------------------------------------------------------------


class Specialization:
    """Algebra map determined by its power-sum values p_n.

    kind is one of "zero", "alpha", "plancherel", "lambda-rho"; the Appendix
    principal specializations used by the topological vertex live in the
    cylindric module, which feeds plain p-value callables to skew_eval.
    """

    def __init__(self, kind: str, p_value, degree: int, label: str = ""):
        self.kind = kind
        self.p_value = p_value
        self.degree = degree  # grading degree of p_1 (0 when numeric)
        self.label = label or kind

    def __repr__(self):
        return f"Specialization({self.label})"


def zero_spec() -> Specialization:
    return Specialization("zero", lambda n: Fraction(0), 0, "zero")


def alpha_spec(values, ring=None, label="alpha") -> Specialization:
    """Finite alpha specialization: p_n = sum_s alpha_s^n.

    Each entry is a rational, or a pair (symbol_name, rational_coeff) meaning
    alpha_s = coeff * symbol (a degree-one monomial in the ring).
    """
    monos = []
    numeric = []
    for vdesc in values:
        if isinstance(vdesc, tuple):
            monos.append(vdesc)
        else:
            numeric.append(Fraction(vdesc))
    if monos and ring is None:
        raise ValueError("formal alpha values need a series ring")

    def p_value(n):
        acc = Fraction(0)
        for a in numeric:
            acc += a**n
        if not monos:
            return acc
        out = ring.scalar(acc)
        for name, c in monos:
            out = out + ring.monomial(Fraction(c) ** n, **{name: n})
        return out

    spec = Specialization("alpha", p_value, 1 if monos else 0, label)
    spec.alpha_values = numeric + [Fraction(c) for _, c in monos]
    return spec


def plancherel_spec(xi, ring=None, label="plancherel") -> Specialization:
    """p_n = xi * delta_{n,1}; xi is a scalar or a ring element."""
    if ring is not None and isinstance(xi, (int, Fraction)):
        xi = ring.scalar(Fraction(xi))

    def p_value(n):
        if n == 1:
            return xi
        return (xi * 0) if hasattr(xi, "ring") else Fraction(0)

    graded = hasattr(xi, "ring") and xi.min_degree() > 0
    return Specialization("plancherel", p_value, 1 if graded else 0, label)


def lambda_rho_p(lam: tuple, r: int, q: Fraction, t: Fraction,
                 shift: int = 0, inverted: bool = False) -> Fraction:
    """Power sums of the principal specialization attached to a partition.

    Standard variant: p_r = sum_i (q^{lam_i} t^{-i+shift})^r
                            + t^{-r (l - shift + 1)} / (1 - t^{-r}),
    the geometric tail summed in closed form.  The inverted variant replaces
    (q, t) by their reciprocals.
    """
    if inverted:
        q = Fraction(1) / q
        t = Fraction(1) / t
    l = length(lam)
    acc = Fraction(0)
    for i, li in enumerate(lam, start=1):
        acc += (q**li * t ** (-i + shift)) ** r
    acc += t ** (-r * (l - shift + 1)) / (1 - t**-r)
    return acc


def lambda_rho_spec(lam: tuple, q, t, shift=0, inverted=False) -> Specialization:
    return Specialization(
        "lambda-rho",
        lambda n: lambda_rho_p(lam, n, q, t, shift=shift, inverted=inverted),
        0,
        f"lambda-rho({lam},shift={shift},inv={inverted})",
    )


def macdonald_positivity_check(spec: Specialization) -> bool:
    """Conservative sufficient check for Macdonald positivity.

    Accepts zero, nonnegative finite-alpha and nonnegative Plancherel data;
    anything else is rejected rather than classified.
    """
    if spec.kind == "zero":
        return True
    if spec.kind == "alpha":
        vals = getattr(spec, "alpha_values", ())
        return all(v >= 0 for v in vals)
    if spec.kind == "plancherel":
        xi = spec.p_value(1)
        if hasattr(xi, "terms"):
            return all(c >= 0 for c in xi.terms.values())
        return xi >= 0
    return False


# ---------------------------------------------------------------------------
# Skew functions via the Fock pairing
# ---------------------------------------------------------------------------


def skew_eval(kind: str, lam: tuple, mu: tuple, spec, q: Fraction, t: Fraction,
              unit=Fraction(1)):
    """P_{lam/mu} or Q_{lam/mu} evaluated at a specialization.

    Realized as the matrix element of the raising half-vertex between the dual
    Macdonald vectors: P_{lam/mu}(X) = <Q_mu| Gamma(X)_+ |P_lam>.  ``spec``
    is a Specialization or a bare callable n -> p_n value; ``unit`` fixes the
    coefficient arithmetic (e.g. a ring one) for formal specializations.
    """
    if not contains(lam, mu):
        return unit * 0
    if lam == mu:
        return unit
    p_value = spec.p_value if isinstance(spec, Specialization) else spec
    if kind == "P":
        ket = macdonald_P_p(lam, q, t)
        bra = macdonald_Q_p(mu, q, t)
    elif kind == "Q":
        ket = macdonald_Q_p(lam, q, t)
        bra = macdonald_P_p(mu, q, t)
    else:
        raise ValueError("kind must be 'P' or 'Q'")
    modes = {}
    for n in range(1, weight(lam) - weight(mu) + 1):
        pv = p_value(n)
        if not pv:
            continue
        modes[n] = pv * ((1 - t**n) / (1 - q**n))
    ket_u = {k: unit * c for k, c in ket.items()}
    image = fock._lowering_apply(modes, ket_u, q, t)
    acc = None
    for nu, c in bra.items():
        d = image.get(nu)
        if d is None:
            continue
        term = d * (c * z_qt(nu, q, t))
        acc = term if acc is None else acc + term
    return acc if acc is not None else unit * 0


def skew_single_alpha(kind: str, lam: tuple, mu: tuple, q, t) -> Fraction:
    """Coefficient of a^{|lam|-|mu|} in the one-variable skew value.

    P_{lam/mu}(a) = psi * a^d and Q_{lam/mu}(a) = phi * a^d on horizontal
    strips, zero otherwise; used as a fast path and as an independent oracle
    for the Fock route.
    """
    if not horizontal_strip(lam, mu):
        return Fraction(0)
    psi, phi = pieri(lam, mu, q, t)
    return psi if kind == "P" else phi


# ---------------------------------------------------------------------------
# Observables
# ---------------------------------------------------------------------------

OBSERVABLE_SERIES = ("E", "E'", "G", "G'")


def elementary_from_powers(r: int, p_of) -> Fraction:
    """e_r via Newton's identities from power-sum values p_of(k)."""
    e = [Fraction(1)]
    for k in range(1, r + 1):
        acc = Fraction(0)
        sign = 1
        for i in range(1, k + 1):
            acc += sign * e[k - i] * p_of(i)
            sign = -sign
        e.append(acc / k)
    return e[r]


def g_row_from_powers(r: int, p_of, q: Fraction, t: Fraction):
    """g_r evaluated from power-sum values: sum over |kappa| = r of
    prod p_{kappa_i} / z_kappa(q,t)."""
    if r == 0:
        return Fraction(1)
    acc = Fraction(0)
    for kappa in partitions_of(r):
        term = Fraction(1) / z_qt(kappa, q, t)
        for kp in kappa:
            term *= p_of(kp)
        acc += term
    return acc


def observable(series: str, r: int, lam: tuple, q: Fraction, t: Fraction) -> Fraction:
    """Exact value of the four observable families on a partition.

    E and E' are elementary symmetric functions of the principal
    specializations at unit shift; G and G' are the one-row duals g_r at the
    zero-shift specializations (G' with reciprocal parameters, equivalently a
    q-shifted argument).
    """
    if series == "E":
        return elementary_from_powers(r, lambda k: lambda_rho_p(lam, k, q, t, shift=1))
    if series == "E'":
        return elementary_from_powers(
            r, lambda k: lambda_rho_p(lam, k, q, t, shift=1, inverted=True))
    if series == "G":
        return g_row_from_powers(
            r, lambda k: lambda_rho_p(lam, k, q, t, shift=0), q, t)
    if series == "G'":
        return g_row_from_powers(
            r, lambda k: q**k * lambda_rho_p(lam, k, q, t, shift=1, inverted=True),
            q, t)
    raise ValueError(f"unknown observable series {series!r}")


def eigenvalue(family: str, r: int, lam: tuple, q: Fraction, t: Fraction) -> Fraction:
    """Eigenvalue of the free-field operator family on the P_lambda ket."""
    if family == "E":
        return elementary_from_powers(r, lambda k: lambda_rho_p(lam, k, q, t))
    if family == "E'":
        return elementary_from_powers(
            r, lambda k: lambda_rho_p(lam, k, q, t, inverted=True))
    if family == "G":
        return g_row_from_powers(r, lambda k: lambda_rho_p(lam, k, q, t), q, t)
    if family == "G'":
        return g_row_from_powers(
            r, lambda k: lambda_rho_p(lam, k, q, t, inverted=True),
            Fraction(1) / q, Fraction(1) / t)
    raise ValueError(f"unknown operator family {family!r}")
