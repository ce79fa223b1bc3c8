"""Kepler homographic solutions r(t) = rho A(nu) s over a collinear central
configuration, and the first integrals H and C evaluated on phase points.

``h`` and ``c`` are the Kepler levels of the scalar problem for rho and nu
(with mu = 1), so ``e**2 = 1 + 2 h c**2``.  The n-body integrals along the
orbit are ``H = I(s) h`` and ``C = I(s) c``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .central_config import CollinearConfig, MassSystem
from .exactmath import rational_sqrt, to_fraction

ECCENTRIC_REAL = "EccentricReal"
CIRCULAR = "Circular"
MOMENTUM_ZERO = "MomentumZero"
ECCENTRIC_COMPLEX = "EccentricComplex"

J2 = np.array([[0.0, -1.0], [1.0, 0.0]])


@dataclass(frozen=True)
class OrbitParams:
    """Case classification of the (h, c) level.

    ``e`` is exact when ``e**2`` is a rational square; otherwise it is the
    nearest rational with denominator <= 10**6 and ``e_lo``/``e_hi`` bracket
    the true value.
    """

    h: Fraction
    c: Fraction
    e2: Fraction
    e: Fraction | None
    e_exact: bool
    e_lo: Fraction | None
    e_hi: Fraction | None
    case_tag: str
    mu: int = 1

    @property
    def e_float(self) -> float:
        return math.sqrt(float(self.e2)) if self.e2 >= 0 else float("nan")


def orbit_from_levels(h, c) -> OrbitParams:
    h = to_fraction(h)
    c = to_fraction(c)
    e2 = 1 + 2 * h * c * c
    if c == 0:
        return OrbitParams(h, c, e2, None, False, None, None, MOMENTUM_ZERO)
    if e2 < 0:
        return OrbitParams(h, c, e2, None, False, None, None, ECCENTRIC_COMPLEX)
    if e2 == 0:
        z = Fraction(0)
        return OrbitParams(h, c, e2, z, True, z, z, CIRCULAR)
    e = rational_sqrt(e2)
    if e is not None:
        return OrbitParams(h, c, e2, e, True, e, e, ECCENTRIC_REAL)
    approx = Fraction(math.sqrt(float(e2))).limit_denominator(10**6)
    # bracket sqrt(e2) by decimals whose squares straddle e2
    step = Fraction(1, 10**12)
    k = math.floor(math.sqrt(float(e2)) * 10**12)
    lo, hi = (k - 1) * step, (k + 2) * step
    while lo * lo > e2:
        lo -= step
    while hi * hi < e2:
        hi += step
    return OrbitParams(h, c, e2, approx, False, lo, hi, ECCENTRIC_REAL)


@dataclass(frozen=True)
class PhasePoint:
    r: np.ndarray
    p: np.ndarray
    d: np.ndarray
    nu: float


def _rotation(nu: float) -> np.ndarray:
    return np.array([[math.cos(nu), -math.sin(nu)], [math.sin(nu), math.cos(nu)]])


def block(A2: np.ndarray, n: int) -> np.ndarray:
    """``diag(A2, ..., A2)`` with n copies."""
    return np.kron(np.eye(n), A2)


def kepler_state(orbit: OrbitParams, nu: float) -> tuple[float, float, float, float]:
    """``(rho, rho', nu_dot, rho_dot)`` at true anomaly nu (prime = d/dnu)."""
    if orbit.case_tag not in (ECCENTRIC_REAL, CIRCULAR):
        raise ValueError(f"no real homographic orbit for case {orbit.case_tag}")
    c = float(orbit.c)
    e = orbit.e_float
    f = 1.0 + e * math.cos(nu)
    if f <= 1e-12:
        raise ValueError(f"1 + e cos(nu) vanishes at nu = {nu}")
    rho = c * c / f
    drho = c * c * e * math.sin(nu) / f**2
    nu_dot = c / rho**2
    return rho, drho, nu_dot, nu_dot * drho


def sample_homographic(config: CollinearConfig, orbit: OrbitParams, nu: float) -> PhasePoint:
    rho, _, nu_dot, rho_dot = kepler_state(orbit, nu)
    n = config.n
    s = config.positions().reshape(n, 2)
    A = _rotation(nu)
    m = config.masses.as_array()
    r = (rho * s @ A.T).reshape(-1)
    vel = (s @ (A @ (rho_dot * np.eye(2) + nu_dot * rho * J2)).T)
    p = (m[:, None] * vel).reshape(-1)
    return PhasePoint(r, p, mutual_distances(r), float(nu))


def mutual_distances(r: np.ndarray) -> np.ndarray:
    q = np.asarray(r).reshape(-1, 2)
    n = len(q)
    return np.array([np.linalg.norm(q[i] - q[j]) for i in range(n) for j in range(i + 1, n)])


def energy(masses: MassSystem, pt: PhasePoint) -> float:
    m = masses.as_array()
    p = pt.p.reshape(-1, 2)
    kin = 0.5 * float(np.sum(np.sum(p * p, axis=1) / m))
    n = len(m)
    pot = 0.0
    k = 0
    for i in range(n):
        for j in range(i + 1, n):
            pot -= m[i] * m[j] / pt.d[k]
            k += 1
    return kin + pot


def angular_momentum(pt: PhasePoint) -> float:
    r = pt.r.reshape(-1, 2)
    p = pt.p.reshape(-1, 2)
    return float(np.sum(r[:, 0] * p[:, 1] - r[:, 1] * p[:, 0]))


def grad_energy(masses: MassSystem, pt: PhasePoint) -> tuple[np.ndarray, np.ndarray]:
    m = masses.as_array()
    r = pt.r.reshape(-1, 2)
    n = len(m)
    gr = np.zeros_like(r)
    for i in range(n):
        for j in range(n):
            if i != j:
                dij = r[i] - r[j]
                norm = np.linalg.norm(dij)
                if norm == 0:
                    raise ValueError("collision: coincident bodies")
                gr[i] += m[i] * m[j] * dij / norm**3
    gp = pt.p.reshape(-1, 2) / m[:, None]
    return gr.reshape(-1), gp.reshape(-1)


def grad_angular_momentum(pt: PhasePoint) -> tuple[np.ndarray, np.ndarray]:
    n = len(pt.r) // 2
    Jh = block(J2, n)
    return Jh.T @ pt.p, Jh @ pt.r


def check_hc_independence(pt: PhasePoint, masses: MassSystem, threshold: float = 1e-8) -> int:
    """Numerical rank of the 2 x 4n Jacobian of (H, C) at a phase point."""
    if np.any(pt.d == 0):
        raise ValueError("collision: coincident bodies")
    gHr, gHp = grad_energy(masses, pt)
    gCr, gCp = grad_angular_momentum(pt)
    Jac = np.vstack([np.concatenate([gHr, gHp]), np.concatenate([gCr, gCp])])
    sv = np.linalg.svd(Jac, compute_uv=False)
    return int(np.sum(sv > threshold))


def newton_residual(config: CollinearConfig, orbit: OrbitParams, nu: float, step: float = 4e-3) -> float:
    """Max defect of ``m_i r_i'' = -dV/dr_i`` along the orbit at nu.

    Time derivatives come from five-point finite differences in nu and
    the chain rule ``d/dt = nu_dot d/dnu``.
    """
    def pos(v):
        return sample_homographic(config, orbit, v).r

    h = step
    r_m2, r_m1, r0, r_p1, r_p2 = (pos(nu + k * h) for k in (-2, -1, 0, 1, 2))
    d1 = (r_m2 - 8 * r_m1 + 8 * r_p1 - r_p2) / (12 * h)
    d2 = (-r_m2 + 16 * r_m1 - 30 * r0 + 16 * r_p1 - r_p2) / (12 * h * h)
    rho, drho, nu_dot, _ = kepler_state(orbit, nu)
    nu_ddot = -2.0 * float(orbit.c) ** 2 * drho / rho**5
    acc = nu_dot**2 * d2 + nu_ddot * d1
    pt = sample_homographic(config, orbit, nu)
    gr, _ = grad_energy(config.masses, pt)
    m = np.repeat(config.masses.as_array(), 2)
    return float(np.max(np.abs(m * acc + gr)))
