"""Hessian of the potential, its mass-scaled form at a collinear central
configuration, the diagonalizer T and the tangent lift of block variations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..central_config import CMatrix, CollinearConfig, MassSystem, Spectrum, spectrum
from ..homographic import J2, OrbitParams, block, kepler_state, _rotation


@dataclass(frozen=True)
class HessianMatrix:
    """Full 2n x 2n Hessian; ``blocks[i][j]`` views the 2 x 2 pieces."""

    matrix: np.ndarray

    @property
    def blocks(self) -> list[list[np.ndarray]]:
        n = self.matrix.shape[0] // 2
        return [[self.matrix[2 * i : 2 * i + 2, 2 * j : 2 * j + 2] for j in range(n)] for i in range(n)]


def hessian(masses: MassSystem, r) -> HessianMatrix:
    """Second derivatives of V = -sum m_i m_j / |r_i - r_j| at r (flat 2n)."""
    m = masses.as_array()
    q = np.asarray(r, dtype=float).reshape(-1, 2)
    n = len(m)
    if q.shape[0] != n:
        raise ValueError("position vector does not match the number of masses")
    H = np.zeros((2 * n, 2 * n))
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            d = q[i] - q[j]
            dist = np.linalg.norm(d)
            if dist == 0:
                raise ValueError("coincident bodies")
            u = d / dist
            Hij = -m[i] * m[j] / dist**3 * (np.eye(2) - 3.0 * np.outer(u, u))
            H[2 * i : 2 * i + 2, 2 * j : 2 * j + 2] = Hij
            H[2 * i : 2 * i + 2, 2 * i : 2 * i + 2] -= Hij
    return HessianMatrix(H)


def mass_matrix(masses: MassSystem, power: float = 1.0) -> np.ndarray:
    return np.diag(np.repeat(masses.as_array() ** power, 2))


def scaled_hessian(config: CollinearConfig) -> np.ndarray:
    """``M^{-1/2} H(s) M^{-1/2} / mu``."""
    Mi = mass_matrix(config.masses, -0.5)
    return Mi @ hessian(config.masses, config.positions()).matrix @ Mi / config.mu


@dataclass(frozen=True)
class Diagonalizer:
    T: np.ndarray
    lambdas: np.ndarray

    @property
    def expected_diagonal(self) -> np.ndarray:
        return np.array([x for lam in self.lambdas for x in (-2.0 * lam, lam)])


def reserved_vectors(config: CollinearConfig) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Normalized ``M^{1/2}s, M^{1/2}Js, M^{1/2}a, M^{1/2}Ja`` with a = (1, 0)."""
    n = config.n
    Mh = mass_matrix(config.masses, 0.5)
    Jh = block(J2, n)
    s = config.positions()
    a = np.tile([1.0, 0.0], n)
    out = []
    for v in (Mh @ s, Mh @ Jh @ s, Mh @ a, Mh @ Jh @ a):
        out.append(v / np.linalg.norm(v))
    return tuple(out)


def diagonalizer(c: CMatrix, config: CollinearConfig, spec: Spectrum | None = None) -> Diagonalizer:
    """Orthogonal T with interleaved columns v_k^(1), v_k^(2).

    The last two C-eigenvectors are replaced by their exact forms
    (proportional to sqrt(m) x and sqrt(m)); the remaining ones are
    re-orthogonalized against them.
    """
    spec = spec or spectrum(c, config.masses)
    n = config.n
    m = config.masses.as_array()
    V = np.array(spec.vectors, dtype=float)
    vx = np.sqrt(m) * config.x
    v1 = np.sqrt(m)
    V[:, n - 2] = vx / np.linalg.norm(vx)
    V[:, n - 1] = v1 / np.linalg.norm(v1)
    # Gram-Schmidt on the generic block against the reserved pair
    for k in range(n - 2):
        w = V[:, k].copy()
        for j in list(range(k)) + [n - 2, n - 1]:
            w -= np.dot(V[:, j], w) * V[:, j]
        V[:, k] = w / np.linalg.norm(w)
    T = np.zeros((2 * n, 2 * n))
    for k in range(n):
        T[0::2, 2 * k] = V[:, k]
        T[1::2, 2 * k + 1] = V[:, k]
    return Diagonalizer(T, np.array(spec.lambdas))


def tangent_lift(
    config: CollinearConfig,
    orbit: OrbitParams,
    nu: float,
    Y,
    Yp,
    diag: Diagonalizer,
) -> tuple[np.ndarray, np.ndarray]:
    """Variation (R, P) in the original phase space from block data (Y, Y').

    ``X = T Y``, ``R = rho A M^{-1/2} X`` and
    ``P = (c / rho^2) A M^{1/2} (rho' X + rho J X + rho X')``.
    """
    n = config.n
    rho, drho, _, _ = kepler_state(orbit, nu)
    c = float(orbit.c)
    X = diag.T @ np.asarray(Y, dtype=float)
    Xp = diag.T @ np.asarray(Yp, dtype=float)
    Ah = block(_rotation(nu), n)
    Jh = block(J2, n)
    R = rho * Ah @ mass_matrix(config.masses, -0.5) @ X
    P = c / rho**2 * Ah @ mass_matrix(config.masses, 0.5) @ (drho * X + rho * Jh @ X + rho * Xp)
    return R, P
