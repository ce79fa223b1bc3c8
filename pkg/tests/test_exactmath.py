from fractions import Fraction as F

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from nbody_galois.exactmath import (
    INFINITY,
    Poly,
    QuadExt,
    RatFunc,
    det,
    field_sqrt,
    is_integer,
    laurent_alpha,
    linear_solve,
    poly_discriminant,
    poly_gcd,
    poly_resultant,
    qsign,
    rank,
    rational_sqrt,
)

small = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def quad(a, b, D=5):
    return QuadExt(F(a), F(b), D)


def test_quadext_collapses_on_squares():
    assert QuadExt.sqrt_of(F(9, 4)) == F(3, 2)
    assert isinstance(QuadExt.sqrt_of(F(9, 4)), F)
    r = QuadExt.sqrt_of(12)
    assert r * r == 12
    assert str(r) == "2*sqrt(3)"


def test_quadext_field_operations():
    x = quad(1, 2)
    y = quad(F(-3, 2), 1)
    assert (x * y) / y == x
    assert x * x.inverse() == 1
    assert x - x == 0
    assert (x ** 3) == x * x * x
    assert x.norm() == 1 - 4 * 5
    with pytest.raises(ZeroDivisionError):
        quad(0, 0).inverse()


def test_mixed_fields_rejected():
    with pytest.raises(ValueError):
        quad(1, 1, 5) + quad(1, 1, 3)


def test_exact_sign():
    # 1 - 7/5 - sqrt(12/5 * 68/5): the circular-case exponent test
    d = F(7, 5)
    D = QuadExt.sqrt_of((1 + d) * (1 + 9 * d))
    assert qsign(1 - d - D) == -1
    # 3 - 2 sqrt(2) > 0 but tiny relative to the parts
    assert qsign(QuadExt(F(3), F(-2), 2)) == 1
    assert qsign(QuadExt(F(-3), F(2), 2)) == -1


def test_field_sqrt():
    assert field_sqrt(F(4, 9)) == F(2, 3)
    assert field_sqrt(F(2)) is None
    # (1 + sqrt5)^2 = 6 + 2 sqrt5
    r = field_sqrt(quad(6, 2))
    assert r is not None and r * r == quad(6, 2)
    assert field_sqrt(quad(1, 1)) is None
    assert rational_sqrt(F(-4)) is None


@given(small, small)
def test_quadext_arithmetic_matches_sympy(a, b):
    x = QuadExt(a, b, 7)
    y = QuadExt(b + 1, a, 7)
    s7 = sp.sqrt(7)
    X = sp.Rational(a.numerator, a.denominator) + sp.Rational(b.numerator, b.denominator) * s7
    Y = sp.Rational((b + 1).numerator, (b + 1).denominator) + sp.Rational(a.numerator, a.denominator) * s7
    z = x * y + x
    Z = sp.expand(X * Y + X)
    assert sp.simplify(Z - (sp.Rational(z.a.numerator, z.a.denominator) + sp.Rational(z.b.numerator, z.b.denominator) * s7)) == 0


def test_poly_basics():
    x = Poly.x()
    p = (x - 1) * (x + 2)
    assert p.degree == 2 and p(1) == 0 and p(-2) == 0
    q, r = divmod(p, x - 1)
    assert r.is_zero() and q == x + 2
    assert Poly.from_roots([1, 1, 3]).root_multiplicity(1) == 2
    assert p.derivative() == 2 * x + 1
    assert Poly.const(0).is_zero()


def test_resultant_examples():
    x = Poly.x()
    assert poly_resultant(x - 1, x + 1) == 2
    assert poly_resultant(x - F(1, 3), x - F(1, 3)) == 0


def test_discriminant_quadratic():
    a, b, c = F(2), F(-3), F(5, 7)
    p = Poly((c, b, a))
    assert poly_discriminant(p) == b * b - 4 * a * c


def test_discriminant_against_sympy():
    z = sp.symbols("z")
    coeffs = [F(3), F(-1, 2), F(0), F(7, 3), F(-2)]
    p = Poly(coeffs)
    ref = sp.discriminant(sum(sp.Rational(c.numerator, c.denominator) * z**k for k, c in enumerate(coeffs)), z)
    assert sp.Rational(str(poly_discriminant(p))) == ref


poly_coeffs = st.lists(st.integers(-4, 4), min_size=2, max_size=4).filter(lambda cs: cs[-1] != 0)


@settings(max_examples=60, deadline=None)
@given(poly_coeffs, poly_coeffs, st.integers(-3, 3))
def test_resultant_zero_iff_common_factor(pc, qc, shared):
    p, q = Poly(pc), Poly(qc)
    if shared:
        lin = Poly((-shared, 1))
        p, q = p * lin, q * lin
    res = poly_resultant(p, q)
    assert (res == 0) == (poly_gcd(p, q).degree >= 1)


def test_ratfunc_normalization_and_calculus():
    x = RatFunc.x()
    f = (x * x - 1) / (x - 1)
    assert f == x + 1
    assert f.den.degree == 0
    g = 1 / (x * x)
    assert g.derivative() == -2 / (x * x * x)
    assert g.at_infinity() == RatFunc(Poly.const(1)) / (x * x)


def test_laurent_alpha_finite_and_infinity():
    x = RatFunc.x()
    r = F(3, 4) / ((x - 2) * (x - 2)) + 1 / x
    assert laurent_alpha(r, F(2)) == (2, F(3, 4))
    assert laurent_alpha(r, F(0)) == (1, F(0))
    # 2/z^2 + O(z^-3) at infinity
    s = (2 * x + 5) / (x * x * x + 1)
    assert laurent_alpha(s, INFINITY) == (2, F(2))


def test_linear_algebra():
    A = [[F(2), F(1)], [F(1), F(3)]]
    assert det(A) == 5
    assert linear_solve(A, [F(3), F(4)]) == [1, 1]
    assert linear_solve([[F(1), F(1)], [F(2), F(2)]], [F(1), F(3)]) is None
    assert rank([[F(1), F(2)], [F(2), F(4)]]) == 1


def test_is_integer():
    assert is_integer(F(4)) and not is_integer(F(1, 2))
    assert not is_integer(quad(1, 1))
