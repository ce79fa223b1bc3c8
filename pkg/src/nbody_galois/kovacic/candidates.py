"""Kovacic case 1: exponent choices with integral d and the polynomial search.

Exponents are ``1/2 +- sqrt(X)/2`` with X in the coefficient field K.
Square roots are grouped by square class (X/X' a square in K); since
square roots from distinct classes are linearly independent over K, d is a
non-negative integer exactly when every radical part cancels and the
K-part is a non-negative integer.  No floating point is involved.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from ..exactmath import Poly, RatFunc, as_fraction, field_sqrt, is_integer, linear_solve, poly_lcm, qsign
from ..variational.scalar import ReducedEquation, Surd


class UnsupportedExtension(ArithmeticError):
    """A candidate needs exponents outside the coefficient field."""


@dataclass(frozen=True)
class KovacicCandidate:
    eps: tuple  # ((location, exponent), ...) over the finite singular points
    eps_inf: object
    d: int
    omega: RatFunc

    def exponents(self) -> tuple:
        return tuple(e for _, e in self.eps) + (self.eps_inf,)


class _Radicals:
    """Assigns each radicand to a square-class representative."""

    def __init__(self):
        self.reps: list = []

    def split(self, s: Surd) -> tuple[object, dict]:
        """``s = base + sum coef_k sqrt(rep_k)``: returns (base, {k: coef})."""
        if s.is_exact:
            return s.base, {}
        X = s.radicand
        for k, R in enumerate(self.reps):
            ratio = field_sqrt(X / R)
            if ratio is not None:
                return s.base, {k: s.coef * ratio}
        self.reps.append(X)
        return s.base, {len(self.reps) - 1: s.coef}


def _combine(parts, signs):
    base = Fraction(0)
    rad: dict = {}
    for (b, r), sg in zip(parts, signs):
        base = base + sg * b
        for k, v in r.items():
            rad[k] = rad.get(k, Fraction(0)) + sg * v
    return base, {k: v for k, v in rad.items() if v != 0}


def enumerate_candidates(req: ReducedEquation) -> list[KovacicCandidate]:
    """All exponent choices whose degree d is a non-negative integer."""
    finite = [s for s in req.singularities if not s.is_infinity]
    inf = req.infinity
    rad = _Radicals()
    options = []
    for s in finite + [inf]:
        options.append([(e, rad.split(e)) for e in s.kovacic_exponents()])
    out = []
    for choice in itertools.product(*options):
        parts = [p for _, p in choice]
        signs = [-1] * len(finite) + [1]
        base, radical = _combine(parts, signs)
        if radical:
            continue
        if not is_integer(base) or qsign(base) < 0:
            continue
        if any(not e.is_exact for e, _ in choice):
            raise UnsupportedExtension(
                "radicals cancel in d but individual exponents lie outside the field"
            )
        eps = tuple((s.location, e.value) for s, (e, _) in zip(finite, choice))
        omega = RatFunc(Poly())
        for loc, val in eps:
            if val != 0:
                omega = omega + RatFunc(Poly.const(val), Poly((-loc, 1)))
        out.append(KovacicCandidate(eps, choice[-1][0].value, int(as_fraction(base)), omega))
    return out


def kovacic_operator(omega: RatFunc, r: RatFunc):
    """``P -> P'' + 2 omega P' + (omega' + omega^2 - r) P`` on RatFunc."""
    Om = omega.derivative() + omega * omega - r

    def L(P: Poly) -> RatFunc:
        Pr = RatFunc(P)
        return RatFunc(P.derivative().derivative()) + 2 * omega * RatFunc(P.derivative()) + Om * Pr

    return L


def polynomial_search(cand: KovacicCandidate, req: ReducedEquation) -> Poly | None:
    """Monic P of degree d solving the auxiliary equation, or None."""
    d = cand.d
    L = kovacic_operator(cand.omega, req.r)
    images = [L(Poly([0] * k + [1])) for k in range(d + 1)]
    D = Poly.const(1)
    for im in images:
        D = poly_lcm(D, im.den)
    cols = []
    for im in images:
        cols.append((im.num * D.exact_div(im.den)).coeffs)
    nrows = max((len(c) for c in cols), default=0)
    A = [[(col[i] if i < len(col) else Fraction(0)) for col in cols] for i in range(nrows)]
    b = [Fraction(0)] * nrows
    A.append([Fraction(0)] * d + [Fraction(1)])
    b.append(Fraction(1))
    sol = linear_solve(A, b)
    if sol is None:
        return None
    P = Poly(sol)
    if not L(P).is_zero():  # pragma: no cover - guarded by the linear algebra
        raise ArithmeticError("polynomial search returned a non-solution")
    return P
