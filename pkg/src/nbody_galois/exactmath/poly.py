"""Dense univariate polynomials and rational functions over Q or Q(sqrt(D))."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .field import QuadExt, to_fraction
from .linalg import det


class _Infinity:
    """The point at infinity of the projective line."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = object.__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __str__(self):
        return "inf"

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()


def _norm(c):
    if isinstance(c, (Fraction, QuadExt)):
        return c
    return to_fraction(c)


class Poly:
    """Polynomial with coefficients stored low degree first.

    The zero polynomial has an empty coefficient tuple and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_norm(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def x(cls) -> Poly:
        return cls((0, 1))

    @classmethod
    def const(cls, c) -> Poly:
        return cls((c,))

    @classmethod
    def from_roots(cls, roots: Iterable, lead=1) -> Poly:
        p = cls.const(lead)
        for r in roots:
            p = p * cls((-r, 1))
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self):
        if not self.coeffs:
            return Fraction(0)
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, k: int):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    def __len__(self):
        return len(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction, QuadExt)):
            return self == Poly.const(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly({list(self.coeffs)!r})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
            terms.append(f"({c})*{mono}" if mono else f"({c})")
        return " + ".join(reversed(terms))

    # --- arithmetic -----------------------------------------------------
    @staticmethod
    def _lift(other) -> Poly | None:
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction, QuadExt)):
            return Poly.const(other)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        return Poly(self[k] + o[k] for k in range(n))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, QuadExt)):
            return Poly(c * other for c in self.coeffs)
        if not isinstance(other, Poly):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Poly:
        result = Poly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __divmod__(self, other: Poly) -> tuple[Poly, Poly]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly(), self
        inv_lc = 1 / other.lc
        quot = [Fraction(0)] * (dq + 1)
        for k in range(dq, -1, -1):
            c = rem[k + len(other.coeffs) - 1] * inv_lc
            quot[k] = c
            if c != 0:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] = rem[k + j] - c * b
        return Poly(quot), Poly(rem[: len(other.coeffs) - 1])

    def __floordiv__(self, other: Poly) -> Poly:
        return divmod(self, other)[0]

    def __mod__(self, other: Poly) -> Poly:
        return divmod(self, other)[1]

    def exact_div(self, other: Poly) -> Poly:
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError("polynomial division is not exact")
        return q

    def monic(self) -> Poly:
        if self.is_zero():
            return self
        inv = 1 / self.lc
        return Poly(c * inv for c in self.coeffs)

    def derivative(self) -> Poly:
        return Poly(k * c for k, c in enumerate(self.coeffs) if k > 0)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def evalf(self, x: complex) -> complex:
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * x + complex(float(c))
        return acc

    def shift(self, c) -> Poly:
        """Coefficients of ``p(x + c)`` (Taylor shift)."""
        cs = list(self.coeffs)
        n = len(cs)
        for i in range(n):
            for k in range(n - 2, i - 1, -1):
                cs[k] = cs[k] + c * cs[k + 1]
        return Poly(cs)

    def reverse(self, n: int | None = None) -> Poly:
        """``x**n p(1/x)`` with ``n`` defaulting to the degree."""
        n = self.degree if n is None else n
        cs = list(self.coeffs) + [Fraction(0)] * (n + 1 - len(self.coeffs))
        return Poly(reversed(cs[: n + 1]))

    def valuation(self) -> int:
        """Order of vanishing at 0; undefined for the zero polynomial."""
        for k, c in enumerate(self.coeffs):
            if c != 0:
                return k
        raise ValueError("valuation of the zero polynomial")

    def root_multiplicity(self, c) -> int:
        if self.is_zero():
            raise ValueError("root multiplicity in the zero polynomial")
        return self.shift(c).valuation()


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """Monic gcd; ``gcd(p, 0) = monic(p)`` and ``gcd(0, 0) = 0``."""
    a, b = p, q
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_lcm(p: Poly, q: Poly) -> Poly:
    return (p * q).exact_div(poly_gcd(p, q)).monic()


def sylvester_matrix(p: Poly, q: Poly) -> list[list]:
    m, n = p.degree, q.degree
    size = m + n
    rows = []
    pc = list(reversed(p.coeffs))
    qc = list(reversed(q.coeffs))
    for i in range(n):
        rows.append([Fraction(0)] * i + pc + [Fraction(0)] * (size - m - 1 - i))
    for i in range(m):
        rows.append([Fraction(0)] * i + qc + [Fraction(0)] * (size - n - 1 - i))
    return rows


def poly_resultant(p: Poly, q: Poly):
    """Resultant as the Sylvester determinant; zero iff a common root exists."""
    if p.is_zero() or q.is_zero():
        raise ValueError("resultant of the zero polynomial")
    if p.degree == 0 and q.degree == 0:
        return Fraction(1)
    if p.degree == 0:
        return p.lc ** q.degree
    if q.degree == 0:
        return q.lc ** p.degree
    return det(sylvester_matrix(p, q))


def poly_discriminant(p: Poly):
    """``(-1)^(n(n-1)/2) res(p, p') / lc(p)`` for ``n = deg p >= 1``."""
    n = p.degree
    if n < 1:
        raise ValueError("discriminant needs degree >= 1")
    if n == 1:
        return Fraction(1)
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * poly_resultant(p, p.derivative()) / p.lc


def _series_div(num: Sequence, den: Sequence, n: int) -> list:
    """First ``n`` coefficients of num/den as power series (den[0] != 0)."""
    inv0 = 1 / den[0]
    out = []
    for k in range(n):
        acc = num[k] if k < len(num) else Fraction(0)
        for j in range(1, min(k, len(den) - 1) + 1):
            acc = acc - den[j] * out[k - j]
        out.append(acc * inv0)
    return out


class RatFunc:
    """Reduced quotient ``num/den`` with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, reduce: bool = True):
        num = num if isinstance(num, Poly) else Poly.const(num)
        den = Poly.const(1) if den is None else (den if isinstance(den, Poly) else Poly.const(den))
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if reduce:
            if num.is_zero():
                den = Poly.const(1)
            else:
                g = poly_gcd(num, den)
                if g.degree > 0:
                    num = num.exact_div(g)
                    den = den.exact_div(g)
            lc = den.lc
            if lc != 1:
                inv = 1 / lc
                num = num * inv
                den = den * inv
        self.num = num
        self.den = den

    @classmethod
    def x(cls) -> RatFunc:
        return cls(Poly.x())

    @staticmethod
    def _lift(other) -> RatFunc | None:
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, Poly):
            return RatFunc(other)
        if isinstance(other, (int, Fraction, QuadExt)):
            return RatFunc(Poly.const(other))
        return None

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RatFunc({self.num!r}, {self.den!r})"

    def __str__(self):
        return f"({self.num}) / ({self.den})"

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        g = poly_gcd(self.den, o.den)
        a = self.den.exact_div(g)
        b = o.den.exact_div(g)
        return RatFunc(self.num * b + o.num * a, a * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, QuadExt)):
            if other == 0:
                return RatFunc(Poly())
            return RatFunc(self.num * other, self.den, reduce=False)
        o = self._lift(other)
        if o is None:
            return NotImplemented
        # cross-cancel before multiplying
        g1 = poly_gcd(self.num, o.den) if not self.num.is_zero() else Poly.const(1)
        g2 = poly_gcd(o.num, self.den) if not o.num.is_zero() else Poly.const(1)
        n1 = self.num.exact_div(g1) if g1.degree > 0 else self.num
        d2 = o.den.exact_div(g1) if g1.degree > 0 else o.den
        n2 = o.num.exact_div(g2) if g2.degree > 0 else o.num
        d1 = self.den.exact_div(g2) if g2.degree > 0 else self.den
        return RatFunc(n1 * n2, d1 * d2, reduce=False)._normalized()

    __rmul__ = __mul__

    def _normalized(self) -> RatFunc:
        if self.num.is_zero():
            return RatFunc(Poly())
        lc = self.den.lc
        if lc == 1:
            return self
        inv = 1 / lc
        return RatFunc(self.num * inv, self.den * inv, reduce=False)

    def inverse(self) -> RatFunc:
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFunc(self.den, self.num, reduce=False)._normalized()

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, QuadExt)):
            return self * (1 / other if not isinstance(other, int) else Fraction(1, other))
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int) -> RatFunc:
        if k < 0:
            return self.inverse() ** (-k)
        return RatFunc(self.num**k, self.den**k, reduce=False)._normalized()

    def derivative(self) -> RatFunc:
        n, d = self.num, self.den
        return RatFunc(n.derivative() * d - n * d.derivative(), d * d)

    def __call__(self, x):
        return self.num(x) / self.den(x)

    def evalf(self, x: complex) -> complex:
        return self.num.evalf(x) / self.den.evalf(x)

    def compose_affine(self, a, b) -> RatFunc:
        """``f(a*x + b)``."""
        def sub(p: Poly) -> Poly:
            out = Poly()
            lin = Poly((b, a))
            for c in reversed(p.coeffs):
                out = out * lin + c
            return out

        return RatFunc(sub(self.num), sub(self.den))

    def at_infinity(self) -> RatFunc:
        """``t**-4 f(1/t)``: the reduced-form coefficient at t = 0 when z = 1/t."""
        dn, dd = self.num.degree, self.den.degree
        if self.num.is_zero():
            return RatFunc(Poly())
        num = self.num.reverse()
        den = self.den.reverse()
        k = dd - dn - 4
        shift = Poly.const(1) if k == 0 else Poly([0] * abs(k) + [1])
        if k >= 0:
            return RatFunc(num * shift, den)
        return RatFunc(num, den * shift)

    def laurent(self, c, n: int) -> tuple[int, list]:
        """Laurent expansion at ``c``: ``(v, [a_v, ..., a_{v+n-1}])``.

        ``f = sum a_k (z - c)**k``; ``c`` may be INFINITY, in which case the
        expansion is of ``f(1/t)`` in powers of ``t``.
        """
        if self.num.is_zero():
            return 0, [Fraction(0)] * n
        if c is INFINITY:
            num = self.num.reverse()
            den = self.den.reverse()
            offset = self.den.degree - self.num.degree
        else:
            num = self.num.shift(c)
            den = self.den.shift(c)
            offset = 0
        vn, vd = num.valuation(), den.valuation()
        ncs = num.coeffs[vn:]
        dcs = den.coeffs[vd:]
        return vn - vd + offset, _series_div(ncs, dcs, n)

    def pole_order(self, c) -> int:
        v, _ = self.laurent(c, 1)
        return max(0, -v)


def laurent_alpha(f: RatFunc, c) -> tuple[int, object]:
    """Pole order of ``f`` at ``c`` and the coefficient of ``(z - c)**-2``.

    At infinity the reduced-form transform ``t**-4 f(1/t)`` is examined, so
    ``alpha`` is the coefficient of ``z**-2`` in the expansion of ``f`` for
    large ``z``.  ``alpha = 0`` whenever the pole order is at most 1.
    """
    g = f.at_infinity() if c is INFINITY else f
    point = Fraction(0) if c is INFINITY else c
    order = g.pole_order(point)
    if order <= 1:
        return order, Fraction(0)
    _, cs = g.laurent(point, order - 1)
    return order, cs[order - 2]
