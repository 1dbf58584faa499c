"""Exact scalar arithmetic.

Every coefficient in this package is either a ``fractions.Fraction`` or a
``QRho``.  ``QRho`` adjoins a formal square root ``rho`` of a fixed rational
``s`` (in practice ``s = t/q``), so elements are ``a + b*rho`` reduced modulo
``rho**2 = s``.  When ``s`` is a perfect square of a rational there is no need
for the extension and plain fractions are used throughout.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt


def parse_rational(text: str) -> Fraction:
    """Parse a rational from a "num/den" or integer string."""
    return Fraction(text.strip())


def format_rational(x) -> str:
    """Serialize a rational as "num/den" (or "num" when integral)."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def rational_sqrt(x: Fraction):
    """Return the exact square root of ``x`` if it is a perfect square, else None."""
    if x < 0:
        return None
    pn, pd = isqrt(x.numerator), isqrt(x.denominator)
    if pn * pn == x.numerator and pd * pd == x.denominator:
        return Fraction(pn, pd)
    return None


class QRho:
    """Element ``a + b*rho`` of Q[rho]/(rho^2 - s) with ``s`` a fixed rational.

    Arithmetic coerces plain integers and fractions on either side.  For a
    non-square ``s`` this is a field; division relies on the conjugate.
    """

    __slots__ = ("a", "b", "s")

    def __init__(self, a, b, s):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.s = Fraction(s)

    # -- helpers -----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, QRho):
            if other.s != self.s:
                raise ValueError("mixing QRho values over different radicands")
            return other
        if isinstance(other, (int, Fraction)):
            return QRho(other, 0, self.s)
        return None

    def __repr__(self):
        return f"QRho({self.a!r}, {self.b!r}, s={self.s!r})"

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        if isinstance(other, QRho):
            return self.s == other.s and self.a == other.a and self.b == other.b
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.s))

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QRho(self.a + o.a, self.b + o.b, self.s)

    __radd__ = __add__

    def __neg__(self):
        return QRho(-self.a, -self.b, self.s)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QRho(self.a - o.a, self.b - o.b, self.s)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QRho(o.a - self.a, o.b - self.b, self.s)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QRho(self.a * o.a + self.s * self.b * o.b,
                    self.a * o.b + self.b * o.a, self.s)

    __rmul__ = __mul__

    def inverse(self):
        # (a + b rho)^(-1) = (a - b rho) / (a^2 - s b^2); nonzero for s non-square.
        n = self.a * self.a - self.s * self.b * self.b
        if n == 0:
            raise ZeroDivisionError("QRho element with vanishing norm")
        return QRho(self.a / n, -self.b / n, self.s)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = QRho(1, 0, self.s)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out


def rho_root(s: Fraction):
    """A square root of ``s``: a Fraction when exact, otherwise a QRho unit."""
    r = rational_sqrt(s)
    if r is not None:
        return r
    return QRho(0, 1, s)


def scalar_is_rational(x) -> bool:
    return isinstance(x, (int, Fraction)) or (isinstance(x, QRho) and x.b == 0)


def as_fraction(x) -> Fraction:
    """Project onto Q, raising if a genuine rho component is present."""
    if isinstance(x, QRho):
        if x.b != 0:
            raise ValueError("value has an irrational rho component")
        return x.a
    return Fraction(x)


def random_rational(rng, max_den: int = 12) -> Fraction:
    """A uniform-ish random rational strictly inside (0, 1)."""
    den = rng.randint(3, max_den)
    num = rng.randint(1, den - 1)
    return Fraction(num, den)


def random_qt_pair(rng, max_den: int = 12, square_ratio: bool = False):
    """Random (q, t) in (0,1)^2 with q != t, suitable as a test point.

    With ``square_ratio`` the pair satisfies t/q = (rational)^2 so that
    (t/q)^(1/2) stays rational.
    """
    while True:
        q = random_rational(rng, max_den)
        if square_ratio:
            r = Fraction(rng.randint(1, 3), rng.randint(1, 3))
            t = q * r * r
            if not (0 < t < 1):
                continue
        else:
            t = random_rational(rng, max_den)
        if q != t and 0 < q < 1 and 0 < t < 1:
            return q, t
