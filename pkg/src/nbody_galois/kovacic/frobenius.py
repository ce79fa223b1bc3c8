"""Local Frobenius solutions of w'' = r w and logarithmic singularities.

With ``r = sum_k q_k x^(k-2)`` around a point (x = z - c, or x = 1/z for
infinity after the reduced-form transform), ``w = x^rho sum f_i x^i`` gives

    F(rho + i) f_i = sum_{k=1..i} q_k f_{i-k},    F(x) = x(x - 1) - q_0.

For an integer exponent difference s the recursion for the smaller
exponent stops at step s; the residual ``R_s`` of that step decides the
logarithm.  The log coefficient in the normalization ``w_+ * int w_+^-2``
is ``g_s = [x^s] f_+^-2 = -R_s / s^2``, and both sides are computed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..exactmath import INFINITY, RatFunc, as_fraction, is_integer, qsign
from ..variational.scalar import ReducedEquation


class ResonanceError(ArithmeticError):
    def __init__(self, step: int):
        super().__init__(f"resonant step {step} in the Frobenius recursion")
        self.step = step


class InvariantError(RuntimeError):
    """Two independent computations that must agree did not."""


@dataclass(frozen=True)
class FrobeniusSeries:
    point: object
    exponent: object
    coeffs: tuple  # f_0 = 1, f_1, ..., f_N
    truncation: int


@dataclass(frozen=True)
class LogReport:
    singularity: object
    exponent_difference: int | None
    g_s: object
    log_present: bool
    status: str  # "Computed" or "NoLogPossible"
    g_s_series: object = None


def local_coefficients(r: RatFunc, c, n: int) -> list:
    """``[q_0, ..., q_{n}]`` with ``r = sum q_k x^(k-2)`` near c."""
    g = r.at_infinity() if c is INFINITY else r
    point = Fraction(0) if c is INFINITY else c
    if g.is_zero():
        return [Fraction(0)] * (n + 1)
    v, cs = g.laurent(point, n + 3)
    if v < -2:
        raise ValueError(f"pole of order {-v} at {c}: not a regular singular point")
    q = [Fraction(0)] * (n + 1)
    for k in range(n + 1):
        idx = k - 2 - v
        if 0 <= idx < len(cs):
            q[k] = cs[idx]
    return q


def _indicial(alpha):
    return lambda x: x * (x - 1) - alpha


def frobenius_series(req: ReducedEquation | RatFunc, c, rho, N: int) -> FrobeniusSeries:
    """Coefficients f_1..f_N of the Frobenius solution with exponent rho."""
    if N < 1:
        raise ValueError("N must be >= 1")
    r = req.r if isinstance(req, ReducedEquation) else req
    q = local_coefficients(r, c, N)
    F = _indicial(q[0])
    if F(rho) != 0:
        raise ValueError(f"{rho} is not an exponent at {c}")
    f = [Fraction(1)]
    for i in range(1, N + 1):
        rhs = sum((q[k] * f[i - k] for k in range(1, i + 1)), Fraction(0))
        den = F(rho + i)
        if den == 0:
            raise ResonanceError(i)
        f.append(rhs / den)
    return FrobeniusSeries(c, rho, tuple(f), N)


def _inverse_square(f: list, n: int) -> list:
    """First n+1 coefficients of ``f^-2`` for a series with f_0 = 1."""
    sq = [sum((f[j] * f[k - j] for j in range(k + 1)), Fraction(0)) for k in range(n + 1)]
    inv = [Fraction(1)]
    for k in range(1, n + 1):
        inv.append(-sum((sq[j] * inv[k - j] for j in range(1, k + 1)), Fraction(0)))
    return inv


def detect_log(req: ReducedEquation, c) -> LogReport:
    """Decide whether the local solutions at c carry a logarithm."""
    sing = req.singularity_at(c)
    diff = sing.exponent_difference
    if not diff.is_exact or not is_integer(diff.value) or qsign(diff.value) < 0:
        return LogReport(c, None, None, False, "NoLogPossible")
    s = int(as_fraction(diff.value))
    if s == 0:
        return LogReport(c, 0, Fraction(1), True, "Computed", Fraction(1))
    q = local_coefficients(req.r, c, s)
    F = _indicial(q[0])
    rho_minus = Fraction(1 - s, 2)
    h = [Fraction(1)]
    for i in range(1, s):
        den = F(rho_minus + i)
        h.append(sum((q[k] * h[i - k] for k in range(1, i + 1)), Fraction(0)) / den)
    R_s = sum((q[k] * h[s - k] for k in range(1, s + 1)), Fraction(0))
    g_s = -R_s / (s * s)
    plus = frobenius_series(req.r, c, Fraction(1 + s, 2), s)
    g_series = _inverse_square(list(plus.coeffs), s)[s]
    if g_series != g_s:
        raise InvariantError(f"log coefficient mismatch at {c}: {g_s} vs {g_series}")
    return LogReport(c, s, g_s, g_s != 0, "Computed", g_series)
