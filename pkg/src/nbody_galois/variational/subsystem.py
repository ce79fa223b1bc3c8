"""One 4 x 4 block of the split variational system and its Tschauner gauge.

Identities in nu are checked symbolically in a rational parametrization:
``t = tan(nu/2)`` for the real elliptic orbit, ``E = exp(i nu)`` for the
complex circular one.  Coefficients live in Q(Delta).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from ..exactmath import Poly, QuadExt, RatFunc, to_fraction


@dataclass(frozen=True)
class SubsystemParams:
    """Parameters of one block: delta = lambda_k - 1 and the orbit.

    ``circular=True`` selects the complex solution f = 1 + exp(i nu) of the
    level 2hc^2 = -1; ``e`` is then ignored.
    """

    delta: Fraction
    e: Fraction | None = None
    circular: bool = False

    def __post_init__(self):
        object.__setattr__(self, "delta", to_fraction(self.delta))
        if self.e is not None:
            object.__setattr__(self, "e", to_fraction(self.e))
        if not self.circular and self.e is None:
            raise ValueError("elliptic subsystem needs an eccentricity")

    @property
    def DeltaSq(self) -> Fraction:
        d = self.delta
        if self.circular:
            return 9 * d * d + 10 * d + 1
        e2 = self.e * self.e
        return 4 * e2 * e2 + 4 * e2 * (d + 1) * (d + 4) + (d + 1) * (3 * d + 4) ** 2 * (9 * d + 1)

    @property
    def Delta(self):
        D2 = self.DeltaSq
        if D2 <= 0:
            raise ValueError(f"Delta^2 = {D2} is not positive")
        return QuadExt.sqrt_of(D2)

    @property
    def field_descriptor(self) -> int:
        """Squarefree d with Q(Delta) = Q(sqrt(d)); 1 when Delta is rational."""
        D = self.Delta
        return D.d if isinstance(D, QuadExt) else 1

    def label(self) -> str:
        if self.circular:
            return f"delta={self.delta}, circular"
        return f"delta={self.delta}, e={self.e}"


def subsystem_firstorder(params: SubsystemParams) -> Callable[[float], np.ndarray]:
    """``nu -> B(nu) = [[0, I], [G/f, -2 J]]`` with G = diag(3 + 2 delta, -delta)."""
    d = float(params.delta)
    G = np.diag([3 + 2 * d, -d])
    m2J = np.array([[0.0, 2.0], [-2.0, 0.0]])

    def B(nu: float) -> np.ndarray:
        if params.circular:
            f = 1 + cmath.exp(1j * nu)
        else:
            f = 1 + float(params.e) * math.cos(nu)
        if abs(f) < 1e-14:
            raise ValueError(f"f(nu) vanishes at nu = {nu}")
        out = np.zeros((4, 4), dtype=complex if params.circular else float)
        out[0:2, 2:4] = np.eye(2)
        out[2:4, 0:2] = G / f
        out[2:4, 2:4] = m2J
        return out

    return B


# --------------------------------------------------------------------------
# small generic matrix helpers (entries only need +, -, *)

def matmul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = A[i][0] * B[0][j]
            for l in range(1, k):
                acc = acc + A[i][l] * B[l][j]
            row.append(acc)
        out.append(row)
    return out


def laplace_det(M):
    n = len(M)
    if n == 1:
        return M[0][0]
    acc = None
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in M[1:]]
        term = M[0][j] * laplace_det(minor)
        if acc is None:
            acc = term
        elif j % 2:
            acc = acc - term
        else:
            acc = acc + term
    return acc


class GaussRat:
    """``re + i im`` with re, im rational functions over the real field."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=0):
        self.re = re if isinstance(re, RatFunc) else RatFunc(Poly.const(re) if not isinstance(re, Poly) else re)
        self.im = im if isinstance(im, RatFunc) else RatFunc(Poly.const(im) if not isinstance(im, Poly) else im)

    @staticmethod
    def _lift(o):
        return o if isinstance(o, GaussRat) else GaussRat(o)

    def __add__(self, o):
        o = self._lift(o)
        return GaussRat(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussRat(-self.re, -self.im)

    def __sub__(self, o):
        o = self._lift(o)
        return GaussRat(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return self._lift(o) - self

    def __mul__(self, o):
        o = self._lift(o)
        return GaussRat(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.re.is_zero() and self.im.is_zero()

    def evalf(self, x: complex) -> complex:
        return self.re.evalf(x) + 1j * self.im.evalf(x)


# --------------------------------------------------------------------------
# symbolic blocks

def _t_parametrization():
    t = RatFunc.x()
    s2 = 1 + t * t
    cos = (1 - t * t) / s2
    sin = 2 * t / s2
    return t, cos, sin, s2


def elliptic_symbolic(params: SubsystemParams, sign: int):
    """Entries of B_+ (sign=+1) or B_- (sign=-1) as functions of t = tan(nu/2)."""
    d, e, D = params.delta, params.e, params.Delta
    _, cos, sin, _ = _t_parametrization()
    f = 1 + e * cos
    g = 4 + 3 * d + e * cos
    fg = f * g
    cos2 = 2 * cos * cos - 1
    b12 = 4 * e * e * cos2 + 2 * e * e + 8 * e * (d + 2) * cos - 9 * d * (d + 1) + 4
    b21 = 2 * e * e + 8 * e * (2 * d + 3) * cos + (3 * d + 4) * (3 * d + 7)
    return [
        [-(e * (2 * d + 3)) * sin / fg, (b12 + sign * D) / (4 * fg)],
        [-(b21 + sign * D) / (4 * fg), -(e * sin) * (d + 2 * f) / fg],
    ]


def elliptic_full_symbolic(params: SubsystemParams):
    d = params.delta
    _, cos, _, _ = _t_parametrization()
    f = 1 + params.e * cos
    z, o = RatFunc(Poly()), RatFunc(Poly.const(1))
    return [
        [z, z, o, z],
        [z, z, z, o],
        [(3 + 2 * d) / f, z, z, RatFunc(Poly.const(2))],
        [z, -d / f, RatFunc(Poly.const(-2)), z],
    ]


def d_dnu_elliptic(F: RatFunc) -> RatFunc:
    _, _, _, s2 = _t_parametrization()
    return F.derivative() * s2 / 2


def circular_symbolic(params: SubsystemParams, sign: int):
    """Entries of B_+/B_- as GaussRat in E = exp(i nu)."""
    d, D = params.delta, params.Delta
    E = RatFunc.x()
    f = 1 + E
    g = 4 + 3 * d + E
    fg = f * g
    b12 = 8 * (d + 2) * E + 8 * E * E
    b21 = -8 * (2 * d + 3) * E
    return [
        [GaussRat(0, E * (2 * d + 3) / fg), GaussRat((b12 - (3 * d + 4) * (3 * d - 1 + sign * D)) / (4 * fg))],
        [GaussRat((b21 - (3 * d + 4) * (3 * d + 7 - sign * D)) / (4 * fg)), GaussRat(0, E * (d + 2 * f) / fg)],
    ]


def circular_full_symbolic(params: SubsystemParams):
    d = params.delta
    E = RatFunc.x()
    f = 1 + E
    z, o = GaussRat(0), GaussRat(1)
    return [
        [z, z, o, z],
        [z, z, z, o],
        [GaussRat((3 + 2 * d) / f), z, z, GaussRat(2)],
        [z, GaussRat(-d / f), GaussRat(-2), z],
    ]


def d_dnu_circular(F: GaussRat) -> GaussRat:
    """``d/dnu = i E d/dE``."""
    E = RatFunc.x()
    return GaussRat(-(E * F.im.derivative()), E * F.re.derivative())


def _assemble_T(Bp, Bm, one, zero):
    return [
        [one, zero, one, zero],
        [zero, one, zero, one],
        [Bp[0][0], Bp[0][1], Bm[0][0], Bm[0][1]],
        [Bp[1][0], Bp[1][1], Bm[1][0], Bm[1][1]],
    ]


def _blockdiag(Bp, Bm, zero):
    return [
        [Bp[0][0], Bp[0][1], zero, zero],
        [Bp[1][0], Bp[1][1], zero, zero],
        [zero, zero, Bm[0][0], Bm[0][1]],
        [zero, zero, Bm[1][0], Bm[1][1]],
    ]


@dataclass
class GaugeSplit:
    params: SubsystemParams
    Bplus: Callable[[float], np.ndarray]
    Bminus: Callable[[float], np.ndarray]
    DeltaSq: Fraction
    T: Callable[[float], np.ndarray]
    Tprime: Callable[[float], np.ndarray]
    symbolic_identity: bool
    symbolic_det: bool
    symbolic: dict = field(default_factory=dict, repr=False)

    def numeric_residual(self, nu: float) -> float:
        """Max entry of ``T^{-1}(B T - T') - diag(B+, B-)`` at nu."""
        B = subsystem_firstorder(self.params)(nu)
        T = self.T(nu)
        lhs = np.linalg.solve(T, B @ T - self.Tprime(nu))
        rhs = np.zeros((4, 4), dtype=lhs.dtype)
        rhs[0:2, 0:2] = self.Bplus(nu)
        rhs[2:4, 2:4] = self.Bminus(nu)
        return float(np.max(np.abs(lhs - rhs)))

    def det_expected(self, nu: float) -> complex:
        d = float(self.params.delta)
        if self.params.circular:
            E = cmath.exp(1j * nu)
            f, g = 1 + E, 4 + 3 * d + E
            return (3 * d + 4) ** 2 * float(self.DeltaSq) / (4 * f * f * g * g)
        c = math.cos(nu)
        e = float(self.params.e)
        f, g = 1 + e * c, 4 + 3 * d + e * c
        return float(self.DeltaSq) / (4 * f * f * g * g)


def tschauner_split(params: SubsystemParams) -> GaugeSplit:
    """Build B+, B- and T(nu); verify the gauge identity and det T exactly."""
    if params.delta <= 0:
        raise ValueError("tschauner_split needs delta > 0")
    if not params.circular and params.e <= 0:
        raise ValueError("tschauner_split needs e > 0 (e = 0 is autonomous)")
    D2 = params.DeltaSq
    if D2 == 0:
        raise ValueError("Delta^2 vanishes")
    if params.circular:
        Bp = circular_symbolic(params, +1)
        Bm = circular_symbolic(params, -1)
        full = circular_full_symbolic(params)
        one, zero = GaussRat(1), GaussRat(0)
        deriv = d_dnu_circular

        def point(nu):
            return cmath.exp(1j * nu)

        def ev(F, x):
            return F.evalf(x)

        d = params.delta
        E = RatFunc.x()
        f, g = 1 + E, 4 + 3 * d + E
        det_target = GaussRat((3 * d + 4) ** 2 * D2 / (4 * f * f * g * g))
    else:
        Bp = elliptic_symbolic(params, +1)
        Bm = elliptic_symbolic(params, -1)
        full = elliptic_full_symbolic(params)
        one, zero = RatFunc(Poly.const(1)), RatFunc(Poly())
        deriv = d_dnu_elliptic

        def point(nu):
            return math.tan(nu / 2)

        def ev(F, x):
            return F.evalf(x)

        _, cos, _, _ = _t_parametrization()
        f = 1 + params.e * cos
        g = 4 + 3 * params.delta + params.e * cos
        det_target = D2 / (4 * f * f * g * g)

    T = _assemble_T(Bp, Bm, one, zero)
    Tp = [[deriv(x) for x in row] for row in T]
    lhs = matmul(full, T)
    rhs = matmul(T, _blockdiag(Bp, Bm, zero))
    identity_ok = all((lhs[i][j] - Tp[i][j] - rhs[i][j]).is_zero() for i in range(4) for j in range(4))
    detT = laplace_det(T)
    det_ok = (detT - det_target).is_zero()

    dtype = complex if params.circular else float

    def numeric(M):
        def at(nu):
            x = point(nu)
            out = np.array([[ev(F, x) for F in row] for row in M], dtype=complex)
            return out if dtype is complex else out.real
        return at

    return GaugeSplit(
        params=params,
        Bplus=numeric(Bp),
        Bminus=numeric(Bm),
        DeltaSq=D2,
        T=numeric(T),
        Tprime=numeric(Tp),
        symbolic_identity=identity_ok,
        symbolic_det=det_ok,
        symbolic={"Bplus": Bp, "Bminus": Bm, "T": T, "det": detT},
    )
