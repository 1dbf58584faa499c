"""Truncated multivariate power series with exact coefficients.

A ``SeriesRing`` fixes an ordered list of graded symbols and a total-degree
cutoff.  ``TruncSeries`` stores a sparse map from exponent vectors to scalar
coefficients (Fraction or QRho); every operation truncates consistently at the
ring cutoff, so addition and multiplication are exact on the stored range.

The ring also hosts the q-Pochhammer machinery: infinite symbols
``(a; p_1, ..., p_n)_inf`` are expanded through their logarithm

    log (a; p_1..p_n)_inf = - sum_{k>=1} a^k / (k * prod_i (1 - p_i^k)),

with rational moduli contributing exact factors 1/(1-p^k) and formal moduli
expanded geometrically.
"""

from __future__ import annotations

from fractions import Fraction

from .scalars import QRho, as_fraction, format_rational, parse_rational


class SeriesRing:
    """Context for truncated series: ordered graded symbols plus a cutoff."""

    def __init__(self, symbols, cutoff: int):
        names, degrees = [], []
        for s in symbols:
            if isinstance(s, str):
                names.append(s)
                degrees.append(1)
            else:
                names.append(s[0])
                degrees.append(int(s[1]))
        if len(set(names)) != len(names):
            raise ValueError("duplicate symbol names")
        if any(d <= 0 for d in degrees):
            raise ValueError("symbol degrees must be positive")
        self.symbols = tuple(names)
        self.degrees = tuple(degrees)
        self.cutoff = int(cutoff)
        self._index = {n: i for i, n in enumerate(names)}

    def __repr__(self):
        syms = ",".join(f"{n}:{d}" for n, d in zip(self.symbols, self.degrees))
        return f"SeriesRing([{syms}], cutoff={self.cutoff})"

    def compatible(self, other: "SeriesRing") -> bool:
        return (self.symbols == other.symbols and self.degrees == other.degrees
                and self.cutoff == other.cutoff)

    def degree_of(self, exp: tuple) -> int:
        return sum(e * d for e, d in zip(exp, self.degrees))

    # -- constructors --------------------------------------------------------

    def zero(self) -> "TruncSeries":
        return TruncSeries(self, {})

    def one(self) -> "TruncSeries":
        return self.scalar(Fraction(1))

    def scalar(self, c) -> "TruncSeries":
        if not c:
            return self.zero()
        return TruncSeries(self, {(0,) * len(self.symbols): c})

    def monomial(self, c, **powers) -> "TruncSeries":
        exp = [0] * len(self.symbols)
        for name, k in powers.items():
            exp[self._index[name]] += int(k)
        exp = tuple(exp)
        if any(e < 0 for e in exp):
            raise ValueError("negative exponent in TruncSeries monomial")
        if not c or self.degree_of(exp) > self.cutoff:
            return self.zero()
        return TruncSeries(self, {exp: c})

    def gen(self, name: str) -> "TruncSeries":
        return self.monomial(Fraction(1), **{name: 1})


class TruncSeries:
    __slots__ = ("ring", "terms")

    def __init__(self, ring: SeriesRing, terms: dict):
        self.ring = ring
        self.terms = terms

    # -- basics ---------------------------------------------------------------

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for exp in sorted(self.terms):
            mono = "*".join(f"{n}^{e}" for n, e in zip(self.ring.symbols, exp) if e)
            c = self.terms[exp]
            bits.append(f"({c}){'*' + mono if mono else ''}")
        return " + ".join(bits)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, QRho)):
            other = self.ring.scalar(other)
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.ring.compatible(other.ring) and self.terms == other.terms

    def copy_terms(self):
        return dict(self.terms)

    def coeff(self, **powers):
        exp = [0] * len(self.ring.symbols)
        for name, k in powers.items():
            exp[self.ring._index[name]] = int(k)
        return self.terms.get(tuple(exp), Fraction(0))

    def constant_term(self):
        return self.terms.get((0,) * len(self.ring.symbols), Fraction(0))

    def min_degree(self):
        """Smallest total degree with a nonzero term; cutoff+1 for the zero series."""
        if not self.terms:
            return self.ring.cutoff + 1
        return min(self.ring.degree_of(e) for e in self.terms)

    # -- ring operations --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, TruncSeries):
            if not self.ring.compatible(other.ring):
                raise ValueError("series from incompatible rings")
            return other
        if isinstance(other, (int, Fraction, QRho)):
            return self.ring.scalar(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        terms = dict(self.terms)
        for e, c in o.terms.items():
            v = terms.get(e, 0) + c
            if v:
                terms[e] = v
            else:
                terms.pop(e, None)
        return TruncSeries(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, QRho)):
            if not other:
                return self.ring.zero()
            return TruncSeries(self.ring, {e: c * other for e, c in self.terms.items()})
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        ring = self.ring
        cutoff = ring.cutoff
        degs = {e: ring.degree_of(e) for e in self.terms}
        out = {}
        for e2, c2 in o.terms.items():
            d2 = ring.degree_of(e2)
            for e1, c1 in self.terms.items():
                if degs[e1] + d2 > cutoff:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return TruncSeries(ring, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = self.ring.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        if isinstance(other, QRho):
            return self * other.inverse()
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    # -- series-level functions ---------------------------------------------------

    def inverse(self):
        """Multiplicative inverse; requires an invertible constant term."""
        c0 = self.constant_term()
        if not c0:
            raise ZeroDivisionError("series with zero constant term")
        inv0 = c0.inverse() if isinstance(c0, QRho) else Fraction(1) / Fraction(c0)
        g = self * inv0 - 1
        out = self.ring.one()
        power = self.ring.one()
        gmin = g.min_degree()
        if gmin <= 0:
            raise ZeroDivisionError("nonpositive valuation after normalization")
        k = 1
        while k * gmin <= self.ring.cutoff:
            power = power * g
            if not power:
                break
            out = out + (power if k % 2 == 0 else -power)
            k += 1
        return out * inv0

    def exp(self):
        """exp of a series with zero constant term."""
        if self.constant_term():
            raise ValueError("exp needs zero constant term")
        vmin = self.min_degree()
        out = self.ring.one()
        power = self.ring.one()
        fact = Fraction(1)
        k = 1
        while k * vmin <= self.ring.cutoff:
            power = power * self
            if not power:
                break
            fact *= k
            out = out + power * (Fraction(1) / fact)
            k += 1
        return out

    def log(self):
        """log of a series with constant term 1."""
        if self.constant_term() != 1:
            raise ValueError("log needs constant term 1")
        g = self - 1
        vmin = g.min_degree()
        out = self.ring.zero()
        power = self.ring.one()
        k = 1
        while k * vmin <= self.ring.cutoff:
            power = power * g
            if not power:
                break
            coef = Fraction(1 if k % 2 == 1 else -1, k)
            out = out + power * coef
            k += 1
        return out

    def subs_zero(self, *names) -> "TruncSeries":
        """Set the named symbols to zero."""
        idx = [self.ring._index[n] for n in names]
        out = {}
        for e, c in self.terms.items():
            if all(e[i] == 0 for i in idx):
                out[e] = c
        return TruncSeries(self.ring, out)

    def truncate(self, cutoff: int) -> "TruncSeries":
        """Forget terms above a lower cutoff (ring object is preserved)."""
        return TruncSeries(self.ring, {
            e: c for e, c in self.terms.items() if self.ring.degree_of(e) <= cutoff})

    # -- serialization -----------------------------------------------------------

    def to_json(self) -> dict:
        terms = []
        for e in sorted(self.terms):
            terms.append({"exp": list(e), "coef": format_rational(as_fraction(self.terms[e]))})
        return {
            "symbols": [{"name": n, "degree": d}
                        for n, d in zip(self.ring.symbols, self.ring.degrees)],
            "cutoff": self.ring.cutoff,
            "terms": terms,
        }

    @staticmethod
    def from_json(data: dict) -> "TruncSeries":
        ring = SeriesRing([(s["name"], s["degree"]) for s in data["symbols"]],
                          data["cutoff"])
        terms = {tuple(t["exp"]): parse_rational(t["coef"]) for t in data["terms"]}
        return TruncSeries(ring, {e: c for e, c in terms.items() if c})


# ---------------------------------------------------------------------------
# q-Pochhammer symbols and theta functions
# ---------------------------------------------------------------------------


def _monomial_parts(x):
    """Split a one-term series into (coefficient, exponent vector)."""
    if isinstance(x, (int, Fraction, QRho)):
        return x, None
    if isinstance(x, TruncSeries):
        if not x.terms:
            return Fraction(0), None
        if len(x.terms) != 1:
            raise ValueError("expected a monomial (single-term series)")
        ((e, c),) = x.terms.items()
        return c, e
    raise TypeError(f"cannot interpret {x!r} as a monomial")


def _modulus_power_series(ring, modulus, k: int):
    """1/(1 - p^k) for a modulus p, as an exact scalar or geometric series."""
    if isinstance(modulus, (int, Fraction)):
        pk = Fraction(modulus) ** k
        if pk == 1:
            raise ZeroDivisionError("modulus power equals 1")
        return Fraction(1) / (1 - pk)
    c, e = _monomial_parts(modulus)
    if e is None:
        pk = c ** k
        if pk == 1:
            raise ZeroDivisionError("modulus power equals 1")
        if isinstance(pk, QRho):
            return (QRho(1, 0, pk.s) - pk).inverse()
        return Fraction(1) / (1 - pk)
    d = ring.degree_of(e)
    if d <= 0:
        raise ValueError("formal modulus must have positive degree")
    out = {}
    j = 0
    while j * k * d <= ring.cutoff:
        out[tuple(j * k * ei for ei in e)] = c ** (j * k)
        j += 1
    return TruncSeries(ring, out)


def qpochhammer(ring: SeriesRing, a, moduli) -> TruncSeries:
    """Truncated expansion of the n-fold symbol (a; p_1, ..., p_n)_infinity.

    ``a`` is a scalar or a monomial in the ring; each modulus is a rational or
    a positive-degree monomial.  A purely rational ``a`` is accepted only when
    every modulus is formal (the constant layer then telescopes to 1 - a);
    otherwise the expansion would not have rational coefficients.
    """
    c, e = _monomial_parts(a)
    if not c:
        return ring.one()
    formal_moduli = []
    rational_moduli = []
    for m in moduli:
        mc, me = _monomial_parts(m)
        if me is None or ring.degree_of(me) == 0:
            rational_moduli.append(m)
        else:
            formal_moduli.append(m)
    dega = 0 if e is None else ring.degree_of(e)

    if dega > 0:
        logsum = ring.zero()
        k = 1
        while k * dega <= ring.cutoff:
            term = ring.monomial(c ** k, **{
                n: k * ei for n, ei in zip(ring.symbols, e) if ei})
            for m in moduli:
                term = term * _modulus_power_series(ring, m, k)
            logsum = logsum + term * Fraction(-1, k)
            k += 1
        return logsum.exp()

    # rational argument: legal only with all-formal moduli, peeling the
    # constant layer (1 - a) off the product
    if rational_moduli:
        raise ValueError(
            "rational Pochhammer argument with a rational modulus has no "
            "exact truncated expansion; keep at least one formal grading")
    if not formal_moduli:
        raise ValueError("purely numeric infinite product rejected")
    mindeg = min(ring.degree_of(_monomial_parts(m)[1]) for m in formal_moduli)
    logsum = ring.zero()
    k = 1
    while k * mindeg <= ring.cutoff:
        bracket = ring.one()
        for m in formal_moduli:
            bracket = bracket * _modulus_power_series(ring, m, k)
        bracket = bracket - 1  # positive-degree part only
        logsum = logsum + bracket * (c ** k) * Fraction(-1, k)
        k += 1
    head = ring.scalar(1 - c) if c != 1 else ring.zero()
    return head * logsum.exp()


def qpochhammer_finite(ring: SeriesRing, a, modulus, n: int) -> TruncSeries:
    """Finite product (a; p)_n = prod_{i=0}^{n-1} (1 - a p^i)."""
    out = ring.one()
    ca, ea = _monomial_parts(a)
    aa = ring.scalar(ca) if ea is None else TruncSeries(ring, {ea: ca})
    cm, em = _monomial_parts(modulus)
    mm = ring.scalar(cm) if em is None else TruncSeries(ring, {em: cm})
    p = ring.one()
    for _ in range(n):
        out = out * (ring.one() - aa * p)
        p = p * mm
    return out


def theta3(ring: SeriesRing, v: str, zeta) -> TruncSeries:
    """Jacobi theta sum over integer charge with u = v^2.

    Returns sum_n v^(n^2) * zeta^n for a rational (or QRho) ``zeta``; the
    half-integer powers u^(n^2/2) are realized through the substitution
    u = v^2.
    """
    dv = ring.degrees[ring._index[v]]
    out = ring.zero()
    n = 0
    while n * n * dv <= ring.cutoff:
        if n == 0:
            out = out + ring.one()
        else:
            zp = zeta ** n
            zm = (Fraction(1) / zeta) ** n if not isinstance(zeta, QRho) else (zeta.inverse()) ** n
            out = out + ring.monomial(zp, **{v: n * n}) + ring.monomial(zm, **{v: n * n})
        n += 1
    return out


def euler_inverse(ring: SeriesRing, u) -> TruncSeries:
    """1/(u; u)_infinity, the partition-count generating series."""
    return qpochhammer(ring, u, [u]).inverse()
