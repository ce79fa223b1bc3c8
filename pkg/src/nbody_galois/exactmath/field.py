"""Rationals and a single real quadratic extension Q(sqrt(D)).

Field elements throughout the package are either :class:`fractions.Fraction`
or :class:`QuadExt`.  Mixed arithmetic works in both directions; a QuadExt
whose irrational part vanishes compares and hashes equal to the matching
Fraction.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Union

_SMALL_PRIMES: list[int] = []


def _primes(limit: int = 2000) -> list[int]:
    if not _SMALL_PRIMES:
        sieve = bytearray([1]) * (limit + 1)
        sieve[0:2] = b"\x00\x00"
        for p in range(2, int(limit**0.5) + 1):
            if sieve[p]:
                sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
        _SMALL_PRIMES.extend(i for i, flag in enumerate(sieve) if flag)
    return _SMALL_PRIMES


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        # floats enter only through user input; take the shortest decimal
        return Fraction(repr(x))
    raise TypeError(f"cannot convert {type(x).__name__} to Fraction")


def isqrt_exact(n: int) -> int | None:
    """Integer square root of ``n`` if ``n`` is a perfect square, else None."""
    if n < 0:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None


def rational_sqrt(q) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None if irrational."""
    q = to_fraction(q)
    if q < 0:
        return None
    num = isqrt_exact(q.numerator)
    den = isqrt_exact(q.denominator)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def squarefree_decompose(D) -> tuple[int, Fraction]:
    """Write a positive rational D as ``k**2 * d`` with ``d`` an integer.

    Square factors over primes below 2000 are stripped, as is any remaining
    perfect-square cofactor.  Returns ``(d, k)``.  ``d == 1`` means D is a
    rational square.
    """
    D = to_fraction(D)
    if D <= 0:
        raise ValueError("quadratic extension requires D > 0")
    # sqrt(p/q) = sqrt(p*q)/q
    n = D.numerator * D.denominator
    k = Fraction(1, D.denominator)
    for p in _primes():
        pp = p * p
        if pp > n:
            break
        while n % pp == 0:
            n //= pp
            k *= p
    r = isqrt_exact(n)
    if r is not None:
        return 1, k * r
    return n, k


class QuadExt:
    """Element ``a + b*sqrt(d)`` of Q(sqrt(d)), ``d`` a non-square integer > 1.

    ``QuadExt(a, b, D)`` accepts any positive rational D and normalizes it;
    when D is a rational square the result is a plain Fraction.
    """

    __slots__ = ("a", "b", "d")

    def __new__(cls, a, b=0, D=None):
        a = to_fraction(a)
        b = to_fraction(b)
        if D is None:
            raise TypeError("QuadExt needs the field descriptor D")
        d, k = squarefree_decompose(D)
        if d == 1:
            return a + b * k
        self = object.__new__(cls)
        self.a = a
        self.b = b * k
        self.d = d
        return self

    @classmethod
    def _raw(cls, a: Fraction, b: Fraction, d: int) -> QuadExt:
        self = object.__new__(cls)
        self.a = a
        self.b = b
        self.d = d
        return self

    @classmethod
    def sqrt_of(cls, D) -> Union[QuadExt, Fraction]:
        """The positive square root of D as a field element."""
        return cls(0, 1, D)

    # --- coercion -----------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, QuadExt):
            if other.d == self.d:
                return other
            r = isqrt_exact(self.d * other.d)
            if r is None:
                raise ValueError(
                    f"mixing Q(sqrt({self.d})) and Q(sqrt({other.d}))"
                )
            # sqrt(d2) = r/d1 * sqrt(d1)
            return QuadExt._raw(other.a, other.b * Fraction(r, self.d), self.d)
        if isinstance(other, (int, Fraction)):
            return QuadExt._raw(Fraction(other), Fraction(0), self.d)
        return None

    # --- arithmetic ---------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExt._raw(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt._raw(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExt._raw(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExt._raw(o.a - self.a, o.b - self.b, self.d)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QuadExt._raw(self.a * other, self.b * other, self.d)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExt._raw(
            self.a * o.a + self.b * o.b * self.d,
            self.a * o.b + self.b * o.a,
            self.d,
        )

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        """``x * conj(x) = a**2 - b**2 d`` (rational)."""
        return self.a * self.a - self.b * self.b * self.d

    def conjugate(self) -> QuadExt:
        return QuadExt._raw(self.a, -self.b, self.d)

    def inverse(self) -> QuadExt:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in Q(sqrt(d))")
        return QuadExt._raw(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return QuadExt._raw(self.a / other, self.b / other, self.d)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = QuadExt._raw(Fraction(1), Fraction(0), self.d)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # --- comparison ---------------------------------------------------
    def is_rational(self) -> bool:
        return self.b == 0

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        if isinstance(other, QuadExt):
            try:
                o = self._coerce(other)
            except ValueError:
                return False
            return self.a == o.a and self.b == o.b
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def sign(self) -> int:
        return qsign(self)

    def __lt__(self, other):
        return qsign(self - other) < 0

    def __le__(self, other):
        return qsign(self - other) <= 0

    def __gt__(self, other):
        return qsign(self - other) > 0

    def __ge__(self, other):
        return qsign(self - other) >= 0

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __complex__(self):
        return complex(float(self))

    def __repr__(self):
        return f"QuadExt({self.a}, {self.b}, D={self.d})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}*sqrt({self.d})"
        op = "+" if self.b > 0 else "-"
        return f"{self.a} {op} {abs(self.b)}*sqrt({self.d})"


FieldElement = Union[Fraction, QuadExt]


def qsign(x) -> int:
    """Exact sign of a field element (real embedding with sqrt(d) > 0)."""
    if not isinstance(x, QuadExt):
        x = to_fraction(x)
        return (x > 0) - (x < 0)
    a, b = x.a, x.b
    sa = (a > 0) - (a < 0)
    sb = (b > 0) - (b < 0)
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    # opposite signs: compare magnitudes a^2 vs b^2 d
    lhs, rhs = a * a, b * b * x.d
    if lhs == rhs:
        return 0  # pragma: no cover - impossible for non-square d
    return sa if lhs > rhs else sb


def field_sqrt(x) -> FieldElement | None:
    """A square root of ``x`` inside its own field, or None.

    For rationals only rational roots are returned (no extension is
    created).  For ``x = a + b sqrt(d)`` a root ``p + q sqrt(d)`` exists iff
    the norm is a rational square and one of ``(a +- sqrt(norm))/2`` is a
    rational square (or ``a/d`` is, when ``p = 0``).
    """
    if not isinstance(x, QuadExt):
        return rational_sqrt(x)
    if x.b == 0:
        r = rational_sqrt(x.a)
        if r is not None:
            return QuadExt._raw(r, Fraction(0), x.d)
        # a = q^2 d ?
        q = rational_sqrt(x.a / x.d)
        if q is not None:
            return QuadExt._raw(Fraction(0), q, x.d)
        return None
    n = rational_sqrt(x.norm())
    if n is None:
        return None
    for cand in ((x.a + n) / 2, (x.a - n) / 2):
        p = rational_sqrt(cand)
        if p is None or p == 0:
            continue
        q = x.b / (2 * p)
        y = QuadExt._raw(p, q, x.d)
        if y * y == x:
            return y
    return None


def is_integer(x) -> bool:
    if isinstance(x, QuadExt):
        return x.b == 0 and x.a.denominator == 1
    return to_fraction(x).denominator == 1


def as_fraction(x) -> Fraction:
    """Rational value of a field element; raises if it is irrational."""
    if isinstance(x, QuadExt):
        if x.b != 0:
            raise ValueError(f"{x} is not rational")
        return x.a
    return to_fraction(x)


def common_d(*xs) -> int | None:
    """The extension descriptor shared by ``xs`` (None if all rational)."""
    d = None
    for x in xs:
        if isinstance(x, QuadExt):
            if d is None:
                d = x.d
            elif d != x.d and isqrt_exact(d * x.d) is None:
                raise ValueError("elements from different quadratic fields")
    return d
