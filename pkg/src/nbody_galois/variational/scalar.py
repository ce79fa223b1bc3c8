"""Scalar second-order equations in z for u = u_2 of the B_+ system, and
their reduced form w'' = r(z) w with a singularity inventory.

Two independent routes produce b1, b0: the closed forms, and elimination
of u_1 from the symbolic B_+ followed by the change of variable.  The
constructors insist that both agree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from ..exactmath import (
    INFINITY,
    Poly,
    QuadExt,
    RatFunc,
    field_sqrt,
    laurent_alpha,
    qsign,
)
from .subsystem import (
    GaussRat,
    SubsystemParams,
    circular_symbolic,
    d_dnu_circular,
    d_dnu_elliptic,
    elliptic_symbolic,
)


class ConstructionError(RuntimeError):
    """Internal consistency check failed while building an equation."""


@dataclass(frozen=True)
class SecondOrderODE:
    """``u'' + b1 u' + b0 u = 0`` in the variable z."""

    b1: RatFunc
    b0: RatFunc
    l_poly: Poly
    params: SubsystemParams
    provenance: str
    independent_variable: str = "z"

    def candidate_singularities(self) -> list:
        """Finite points where the construction can place a pole."""
        p = self.params
        z_l = -self.l_poly[0] / self.l_poly[1]
        if p.circular:
            pts = [Fraction(0), Fraction(1), z_l]
        else:
            pts = [Fraction(0), 1 - p.e, 1 + p.e, z_l]
        out = []
        for x in pts:
            if all(x != y for y in out):
                out.append(x)
        return out


def _lin(a, b) -> Poly:
    """``a + b z``."""
    return Poly((a, b))


def l_elliptic(params: SubsystemParams) -> Poly:
    d, e, D = params.delta, params.e, params.Delta
    return _lin(d * (9 * d + 17) + D + 2 * e * e + 4, 8 * (2 * d + 3))


def l_circular(params: SubsystemParams) -> Poly:
    d, D = params.delta, params.Delta
    return _lin(d * (9 * d - 3 * D + 17) - 4 * D + 4, 8 * (2 * d + 3))


def closed_form_elliptic(params: SubsystemParams) -> tuple[RatFunc, RatFunc, Poly]:
    d, e, D = params.delta, params.e, params.Delta
    z = RatFunc.x()
    l = l_elliptic(params)
    L = RatFunc(l)
    q = (z - e - 1) * (z + e - 1)
    b1 = (z - 1) / q - 8 * (2 * d + 3) / L
    bracket = (
        d * (d * (9 * d + 17) + D + 2 * e * e + 4)
        + 4 * z * ((d - 3) * d + D + 2 * e * e - 8)
        + 16 * (2 * d + 3) * z * z
    )
    b0 = -bracket / (z * q * L)
    return b1, b0, l


def closed_form_circular(params: SubsystemParams) -> tuple[RatFunc, RatFunc, Poly]:
    d = params.delta
    z = RatFunc.x()
    l = l_circular(params)
    L = RatFunc(l)
    b1 = 1 / (z - 1) - 8 * (2 * d + 3) / L
    b0 = (8 * (2 * d + 3) * (3 * d + 2 * z + 2) / L - d / z - 4) / ((z - 1) * (z - 1))
    return b1, b0, l


def _eliminate(B, deriv):
    """Coefficients of ``u2'' + a1 u2' + a0 u2 = 0`` from ``u' = B u``."""
    b11, b12 = B[0]
    b21, b22 = B[1]
    k = deriv(b21) * _inverse(b21) + b11
    a1 = -(k + b22)
    a0 = k * b22 - b12 * b21 - deriv(b22)
    return a1, a0


def _inverse(x):
    if isinstance(x, GaussRat):
        if not x.im.is_zero():
            raise ConstructionError("unexpected complex pivot in elimination")
        return GaussRat(x.re.inverse())
    return x.inverse()


def _even_in_t_to_z(F: RatFunc, e) -> RatFunc:
    """Rewrite an even function of t = tan(nu/2) in z = 1 + e cos(nu).

    Uses ``t^2 = (e - z + 1)/(e + z - 1)``.
    """
    num, den = F.num.coeffs, F.den.coeffs
    if any(c != 0 for c in num[1::2]) or any(c != 0 for c in den[1::2]):
        raise ConstructionError("expression is not a function of cos(nu) alone")
    A = Poly((e + 1, -1))
    B = Poly((e - 1, 1))

    def homog(cs):
        k = len(cs) - 1
        out = Poly()
        for j, c in enumerate(cs):
            out = out + A**j * B ** (k - j) * c
        return out, k

    pn, kn = homog(num[0::2])
    pd, kd = homog(den[0::2])
    return RatFunc(pn * B**kd, pd * B**kn)


def derived_elliptic(params: SubsystemParams) -> tuple[RatFunc, RatFunc]:
    e = params.e
    a1, a0 = _eliminate(elliptic_symbolic(params, +1), d_dnu_elliptic)
    # d/dnu = -e sin(nu) d/dz and u_nunu = e^2 sin^2 u_zz - e cos(nu) u_z
    t = RatFunc.x()
    sin = 2 * t / (1 + t * t)
    w1 = _even_in_t_to_z(-(e * sin) * a1, e)
    w0 = _even_in_t_to_z(a0, e)
    z = RatFunc.x()
    s2 = e * e - (z - 1) * (z - 1)
    return (w1 - (z - 1)) / s2, w0 / s2


def derived_circular(params: SubsystemParams) -> tuple[RatFunc, RatFunc]:
    a1, a0 = _eliminate(circular_symbolic(params, +1), d_dnu_circular)
    if not a1.re.is_zero() or not a0.im.is_zero():
        raise ConstructionError("circular reduction produced complex coefficients")
    # z = 1 + E, d/dnu = i (z - 1) d/dz
    shift = lambda F: F.compose_affine(1, -1)  # noqa: E731
    z = RatFunc.x()
    b1 = (1 + shift(a1.im)) / (z - 1)
    b0 = -shift(a0.re) / ((z - 1) * (z - 1))
    return b1, b0


def scalar_ode_elliptic(params: SubsystemParams, cross_check: bool = True) -> SecondOrderODE:
    if params.circular or params.e is None or params.e <= 0:
        raise ValueError("scalar_ode_elliptic needs e > 0")
    b1, b0, l = closed_form_elliptic(params)
    if cross_check:
        c1, c0 = derived_elliptic(params)
        if c1 != b1 or c0 != b0:
            raise ConstructionError("closed-form coefficients disagree with the gauge elimination")
    return SecondOrderODE(b1, b0, l, params, "elliptic: u2 of B+ in z = 1 + e cos(nu)")


def scalar_ode_circular(params: SubsystemParams, cross_check: bool = True) -> SecondOrderODE:
    if not params.circular:
        raise ValueError("scalar_ode_circular needs the circular tag")
    b1, b0, l = closed_form_circular(params)
    if cross_check:
        c1, c0 = derived_circular(params)
        if c1 != b1 or c0 != b0:
            raise ConstructionError("closed-form coefficients disagree with the gauge elimination")
    return SecondOrderODE(b1, b0, l, params, "circular: u2 of B+ in z = 1 + exp(i nu)")


# --------------------------------------------------------------------------
# exponents

@dataclass(frozen=True)
class Surd:
    """``base + coef * sqrt(radicand)``; radicand None means exact."""

    base: object
    coef: object = Fraction(0)
    radicand: object = None

    @property
    def is_exact(self) -> bool:
        return self.radicand is None or self.coef == 0

    @property
    def value(self):
        if not self.is_exact:
            raise ValueError(f"{self} is not in the coefficient field")
        return self.base

    def enclosure(self, prec: int = 128) -> mpmath.mpc:
        with mpmath.workprec(prec):
            v = _mp(self.base)
            if not self.is_exact:
                v = v + _mp(self.coef) * mpmath.sqrt(mpmath.mpc(_mp(self.radicand)))
            return mpmath.mpc(v)

    def __eq__(self, other):
        if isinstance(other, Surd):
            if self.is_exact and other.is_exact:
                return self.base == other.base
            return (self.base, self.coef, self.radicand) == (other.base, other.coef, other.radicand)
        return self.is_exact and self.base == other

    def __hash__(self):
        if self.is_exact:
            return hash(self.base)
        return hash((self.base, self.coef, self.radicand))

    def __complex__(self):
        return complex(self.enclosure(64))

    def __str__(self):
        if self.is_exact:
            return str(self.base)
        return f"{self.base} + ({self.coef})*sqrt({self.radicand})"


def _mp(x) -> mpmath.mpf:
    if isinstance(x, QuadExt):
        return mpmath.mpf(x.a.numerator) / x.a.denominator + (
            mpmath.mpf(x.b.numerator) / x.b.denominator
        ) * mpmath.sqrt(x.d)
    x = Fraction(x)
    return mpmath.mpf(x.numerator) / x.denominator


def sqrt_surd(X) -> Surd:
    """sqrt(X) as a Surd, exact whenever X is a square in its field."""
    if X == 0:
        return Surd(Fraction(0))
    r = field_sqrt(X)
    if r is not None:
        # the positive real root when X > 0
        if qsign(X) > 0 and qsign(r) < 0:
            r = -r
        return Surd(r)
    return Surd(Fraction(0), Fraction(1), X)


@dataclass(frozen=True)
class Singularity:
    location: object
    pole_order: int
    alpha: object
    X: object  # 1 + 4 alpha
    exponent_difference: Surd
    exponents: tuple[Surd, Surd]

    @property
    def is_infinity(self) -> bool:
        return self.location is INFINITY

    def kovacic_exponents(self) -> tuple[Surd, ...]:
        """Exponent choices for the hyperexponential search.

        A simple pole contributes the single exponent 1; other points the
        distinct roots of the indicial equation.
        """
        if not self.is_infinity and self.pole_order == 1:
            return (Surd(Fraction(1)),)
        a, b = self.exponents
        if a == b:
            return (a,)
        return (a, b)


def make_singularity(location, order: int, alpha) -> Singularity:
    X = 1 + 4 * alpha
    diff = sqrt_surd(X)
    half = Fraction(1, 2)
    if diff.is_exact:
        plus = Surd(half + diff.base / 2)
        minus = Surd(half - diff.base / 2)
    else:
        plus = Surd(half, diff.coef / 2, diff.radicand)
        minus = Surd(half, -diff.coef / 2, diff.radicand)
    return Singularity(location, order, alpha, X, diff, (plus, minus))


@dataclass
class ReducedEquation:
    """``w'' = r(z) w`` with its singularity inventory (infinity last).

    ``P_raw / Qt_raw`` is r written over the structural denominator (before
    cancellation) and ``Q_poly`` collects its linear factors.
    """

    r: RatFunc
    singularities: list[Singularity]
    Q_poly: Poly | None = None
    P_raw: Poly | None = None
    Qt_raw: Poly | None = None
    fuchsian: bool = True
    ode: SecondOrderODE | None = None
    notes: list[str] = field(default_factory=list)

    def finite_singularities(self) -> list:
        return [s.location for s in self.singularities if not s.is_infinity]

    def singularity_at(self, c) -> Singularity:
        for s in self.singularities:
            if (c is INFINITY and s.is_infinity) or (c is not INFINITY and not s.is_infinity and s.location == c):
                return s
        raise KeyError(f"{c} is not a singular point")

    @property
    def infinity(self) -> Singularity:
        return self.singularity_at(INFINITY)


def inventory(r: RatFunc, candidates: list) -> tuple[list[Singularity], bool, list[str]]:
    """Classify the candidate points and infinity.

    Every root of the denominator must be among the candidates: the pole
    orders found must add up to the denominator degree.
    """
    sings = []
    notes = []
    total = 0
    fuchsian = True
    for c in candidates:
        order, alpha = laurent_alpha(r, c)
        if order == 0:
            notes.append(f"candidate point {c} is regular")
            continue
        total += order
        if order > 2:
            fuchsian = False
        sings.append(make_singularity(c, order, alpha))
    if total != r.den.degree:
        raise ConstructionError(
            f"denominator has degree {r.den.degree} but the candidate poles account for {total}"
        )
    order, alpha = laurent_alpha(r, INFINITY)
    if order > 2:
        fuchsian = False
    sings.append(make_singularity(INFINITY, order, alpha))
    return sings, fuchsian, notes


def reduce_to_normal_form(ode: SecondOrderODE | None = None, *, b1: RatFunc | None = None,
                          b0: RatFunc | None = None, candidates: list | None = None) -> ReducedEquation:
    """``r = b1'/2 + b1^2/4 - b0`` plus the singularity inventory.

    Either pass a SecondOrderODE built by this module or bare ``b1, b0``
    with an explicit list of finite ``candidates``.
    """
    if ode is not None:
        b1, b0 = ode.b1, ode.b0
        candidates = ode.candidate_singularities()
    if b1 is None or b0 is None:
        raise ValueError("need b1 and b0")
    r = b1.derivative() / 2 + b1 * b1 / 4 - b0
    if candidates is None:
        raise ValueError("need candidate singular points")
    sings, fuchsian, notes = inventory(r, candidates)
    req = ReducedEquation(r, sings, fuchsian=fuchsian, ode=ode, notes=notes)
    if ode is not None:
        _attach_structural(req, ode)
    if not fuchsian:
        req.notes.append("non-Fuchsian: a pole of order > 2 was found")
    return req


def _attach_structural(req: ReducedEquation, ode: SecondOrderODE) -> None:
    p = ode.params
    z = Poly.x()
    l = ode.l_poly
    if p.circular:
        Q = z * (z - 1) * l
        Qt = (z - 1) * l * Q * 4
    else:
        e = p.e
        lin = Poly((e + 1, -1)) * Poly((e - 1, 1))  # (e - z + 1)(e + z - 1)
        Q = z * lin * l
        Qt = lin * l * Q * 4
    P = req.r * RatFunc(Qt)
    if P.den.degree != 0:
        raise ConstructionError("structural denominator does not clear r")
    req.Q_poly = Q
    req.Qt_raw = Qt
    req.P_raw = P.num * (1 / P.den.lc)


def equation_from_r(r: RatFunc, candidates: list) -> ReducedEquation:
    """Reduced equation for a directly given r (controls and tests)."""
    sings, fuchsian, notes = inventory(r, candidates)
    return ReducedEquation(r, sings, fuchsian=fuchsian, notes=notes)
