"""Euler-Moulton collinear central configurations and their C-matrix spectrum.

Units: G = 1 and the configuration is scaled so that mu = -V(s)/I(s) = 1.
Orderings are 0-based tuples; ``ordering[k]`` is the body occupying the
k-th place from the left.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .numerics import jacobi_eigen, newton_solve


class ConfigurationError(ValueError):
    pass


class SpectrumError(RuntimeError):
    pass


@dataclass(frozen=True)
class MassSystem:
    masses: tuple[float, ...]

    def __init__(self, masses: Sequence[float]):
        ms = tuple(float(m) for m in masses)
        if len(ms) < 2:
            raise ConfigurationError("need at least two bodies")
        if not all(m > 0 and math.isfinite(m) for m in ms):
            raise ConfigurationError("masses must be positive")
        object.__setattr__(self, "masses", ms)

    @property
    def n(self) -> int:
        return len(self.masses)

    @property
    def total(self) -> float:
        return sum(self.masses)

    def as_array(self) -> np.ndarray:
        return np.array(self.masses)


@dataclass(frozen=True)
class CollinearConfig:
    masses: MassSystem
    ordering: tuple[int, ...]
    x: np.ndarray
    mu: float
    V_value: float
    I_value: float
    residual: float

    @property
    def n(self) -> int:
        return self.masses.n

    def positions(self) -> np.ndarray:
        """Planar positions ``s`` as a flat 2n vector ``(x_1, 0, x_2, 0, ...)``."""
        s = np.zeros(2 * self.n)
        s[0::2] = self.x
        return s


@dataclass(frozen=True)
class CMatrix:
    entries: np.ndarray


@dataclass(frozen=True)
class RationalDelta:
    """Rational stand-in for a float delta with a certified bound.

    ``|delta_true - value| <= bound`` where ``bound`` combines the distance
    to the float and the eigenvalue error estimate; ``lo``/``hi`` are
    rational endpoints ``value -+ bound``.
    """

    value: Fraction
    bound: float
    lo: Fraction
    hi: Fraction
    float_value: float


@dataclass(frozen=True)
class Spectrum:
    lambdas: np.ndarray
    vectors: np.ndarray
    deltas: tuple[float, ...]
    delta_rationalized: tuple[RationalDelta, ...]
    eig_error: float = 0.0
    conley_defect: float = 0.0
    notes: tuple[str, ...] = field(default_factory=tuple)


def check_ordering(ordering: Sequence[int] | None, n: int) -> tuple[int, ...]:
    if ordering is None:
        return tuple(range(n))
    ordering = tuple(int(k) for k in ordering)
    if sorted(ordering) != list(range(n)):
        raise ConfigurationError(f"ordering must be a permutation of 0..{n - 1}")
    return ordering


def canonical_ordering(ordering: Sequence[int], masses: MassSystem) -> tuple[int, ...]:
    """Pick between an ordering and its mirror image.

    The heavier end body goes on the right; with equal end masses the
    lexicographically smaller tuple wins.
    """
    fwd = check_ordering(ordering, masses.n)
    rev = tuple(reversed(fwd))
    m = masses.masses
    if m[fwd[0]] != m[fwd[-1]]:
        return fwd if m[fwd[-1]] > m[fwd[0]] else rev
    return min(fwd, rev)


def potential(masses: MassSystem, x: np.ndarray) -> float:
    m = masses.masses
    return -sum(
        m[i] * m[j] / abs(x[i] - x[j]) for i in range(len(m)) for j in range(i + 1, len(m))
    )


def moment(masses: MassSystem, x: np.ndarray) -> float:
    return float(np.dot(masses.as_array(), np.asarray(x) ** 2))


def moulton_residual(masses: MassSystem, x: np.ndarray, mu: float = 1.0) -> np.ndarray:
    """``sum_j m_j (x_i - x_j)/|x_i - x_j|^3 - mu x_i`` for every body."""
    m = masses.as_array()
    d = x[:, None] - x[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(d != 0, np.sign(d) / d**2, 0.0)
    return t @ m - mu * x


def _moulton_jacobian(masses: MassSystem, x: np.ndarray, mu: float) -> np.ndarray:
    m = masses.as_array()
    d = np.abs(x[:, None] - x[None, :])
    np.fill_diagonal(d, np.inf)
    K = 2.0 * m[None, :] / d**3
    J = K.copy()
    np.fill_diagonal(J, -K.sum(axis=1) - mu)
    return J


def _initial_guess(masses: MassSystem, ordering: tuple[int, ...], mu: float) -> np.ndarray:
    n = masses.n
    x = np.empty(n)
    for place, body in enumerate(ordering):
        x[body] = place - (n - 1) / 2
    m = masses.as_array()
    x -= np.dot(m, x) / m.sum()
    # scale so that -V = mu I
    alpha = (-potential(masses, x) / (mu * moment(masses, x))) ** (1 / 3)
    return alpha * x


def solve_moulton(
    masses: MassSystem | Sequence[float],
    ordering: Sequence[int] | None = None,
    tol: float = 1e-13,
    mu: float = 1.0,
    x0: Sequence[float] | None = None,
    max_iter: int = 200,
) -> CollinearConfig:
    """Collinear central configuration for the given masses and ordering.

    Solves the n force-balance equations for x directly; summing them with
    the mass weights shows the centre of mass is zero at any root.  ``mu``
    other than 1 is only for scaling checks (the root scales as mu^(-1/3)).
    """
    if not isinstance(masses, MassSystem):
        masses = MassSystem(masses)
    if tol <= 0:
        raise ValueError("tol must be positive")
    ordering = check_ordering(ordering, masses.n)
    guess = _initial_guess(masses, ordering, mu) if x0 is None else np.array(x0, float)
    x = newton_solve(
        lambda v: moulton_residual(masses, v, mu),
        lambda v: _moulton_jacobian(masses, v, mu),
        guess,
        tol=tol,
        max_iter=max_iter,
    )
    placed = x[list(ordering)]
    if np.any(np.diff(placed) <= 0):
        raise ConfigurationError("Newton converged to a configuration with a different ordering")
    res = float(np.max(np.abs(moulton_residual(masses, x, mu))))
    V = potential(masses, x)
    I = moment(masses, x)
    return CollinearConfig(masses, ordering, x, mu, V, I, res)


def build_cmatrix(config: CollinearConfig) -> CMatrix:
    m = config.masses.as_array()
    x = config.x
    n = len(m)
    C = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            dx = abs(x[i] - x[j])
            if dx == 0:
                raise ConfigurationError("coincident bodies in configuration")
            C[i, j] = -math.sqrt(m[i] * m[j]) / (config.mu * dx**3)
    for i in range(n):
        C[i, i] = -sum(math.sqrt(m[j] / m[i]) * C[i, j] for j in range(n) if j != i)
    return CMatrix(C)


def rationalize(value: float, err: float, max_den: int = 10**6) -> RationalDelta:
    approx = Fraction(value).limit_denominator(max_den)
    bound = abs(value - float(approx)) + err
    # round the bound up to two significant decimal digits
    if bound == 0:
        b = Fraction(0)
    else:
        scale = Fraction(10) ** (1 - math.floor(math.log10(bound)))
        b = math.ceil(bound * scale) / scale
        if b < bound:
            b += 1 / scale
    return RationalDelta(approx, float(b), approx - b, approx + b, value)


def spectrum(c: CMatrix, masses: MassSystem, tol: float = 1e-8) -> Spectrum:
    """Eigenvalues of C in descending order, the deltas and their enclosures.

    The enclosure radius is the distance from the float to the chosen
    rational plus an error estimate: the eigen-residual ``||Cv - lambda v||``
    (a bound for symmetric matrices) plus the defects of the two forced
    eigenvalues 0 and 1, which measure how far the upstream configuration
    is from exact.
    """
    S = np.asarray(c.entries, dtype=float)
    lam, V = jacobi_eigen(S, tol=1e-14)
    n = len(lam)
    resid = max(np.linalg.norm(S @ V[:, k] - lam[k] * V[:, k]) for k in range(n))
    defect = abs(lam[-1])
    if n >= 2:
        defect = max(defect, abs(lam[-2] - 1.0))
    if defect > tol:
        raise SpectrumError(
            f"Conley pattern violated: lambda_n = {lam[-1]:.3e}, lambda_n-1 = {lam[-2]:.12g}"
        )
    if n > 2 and lam[n - 3] <= 1.0 + tol:
        raise SpectrumError(f"Conley pattern violated: lambda_{n - 2} = {lam[n - 3]!r} <= 1")
    err = float(resid) + defect + 1e-14 * max(1.0, float(np.max(np.abs(lam))))
    deltas = tuple(float(lam[k] - 1.0) for k in range(n - 2))
    rat = tuple(rationalize(d, err) for d in deltas)
    notes = () if deltas else ("no delta parameters (n = 2)",)
    return Spectrum(lam, V, deltas, rat, float(resid), float(defect), notes)
