"""Floating-point engines: damped Newton, cyclic Jacobi, Dormand-Prince
integration of linear systems along complex polygonal paths, monodromy.

Nothing in here decides a verdict; these routines back the central
configuration solver and corroborate the exact analysis numerically.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np


class ConvergenceError(RuntimeError):
    pass


class IntegrationError(RuntimeError):
    pass


# --------------------------------------------------------------------------
# Newton

def newton_solve(F, J, x0, tol: float = 1e-13, max_iter: int = 100):
    """Damped Newton iteration until ``max|F(x)| < tol``.

    ``J`` must return the analytic Jacobian.  A singular Jacobian or a
    non-decreasing residual under full backtracking raises
    :class:`ConvergenceError`.
    """
    scalar = np.ndim(x0) == 0
    x = np.atleast_1d(np.asarray(x0, dtype=float)).copy()

    def f(v):
        return np.atleast_1d(np.asarray(F(v[0] if scalar else v), dtype=float))

    def jac(v):
        return np.atleast_2d(np.asarray(J(v[0] if scalar else v), dtype=float))

    fx = f(x)
    for _ in range(max_iter):
        res = np.max(np.abs(fx))
        if res < tol:
            return x[0] if scalar else x
        Jx = jac(x)
        try:
            if np.linalg.cond(Jx) > 1e14:
                raise np.linalg.LinAlgError("singular Jacobian")
            step = np.linalg.solve(Jx, -fx)
        except np.linalg.LinAlgError as exc:
            raise ConvergenceError(f"Newton step failed: {exc}") from None
        t = 1.0
        while True:
            xn = x + t * step
            fn = f(xn)
            rn = np.max(np.abs(fn))
            if np.all(np.isfinite(fn)) and (rn < (1 - 1e-4 * t) * res or rn < tol):
                break
            t *= 0.5
            if t < 1e-10:
                raise ConvergenceError("line search failed to reduce the residual")
        x, fx = xn, fn
    if np.max(np.abs(fx)) < tol:
        return x[0] if scalar else x
    raise ConvergenceError(f"no convergence after {max_iter} iterations")


# --------------------------------------------------------------------------
# Jacobi eigensolver

def jacobi_eigen(S, tol: float = 1e-13, max_sweeps: int = 100):
    """Eigen-decomposition of a real symmetric matrix by cyclic Jacobi sweeps.

    Returns ``(eigenvalues, V)`` sorted by descending eigenvalue, with the
    eigenvectors as the columns of the orthogonal matrix ``V``.  Iteration
    stops once the off-diagonal Frobenius norm drops below
    ``tol * max(1, ||S||_F)``.
    """
    A = np.array(S, dtype=float)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("jacobi_eigen needs a square matrix")
    if np.max(np.abs(A - A.T), initial=0.0) > 1e-12 * max(1.0, np.max(np.abs(A))):
        raise ValueError("jacobi_eigen needs a symmetric matrix")
    A = 0.5 * (A + A.T)
    V = np.eye(n)
    scale = max(1.0, np.linalg.norm(A))
    for _ in range(max_sweeps):
        # summed directly: ||A||^2 - ||diag A||^2 cancels near convergence
        off = math.sqrt(2.0 * float(np.sum(np.triu(A, 1) ** 2)))
        if off < tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                diff = A[q, q] - A[p, p]
                if abs(diff) > 1e150 * abs(apq):
                    t = apq / diff
                else:
                    theta = diff / (2.0 * apq)
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                # A <- R^T A R with R the (p, q) rotation
                Ap, Aq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * Ap - s * Aq
                A[:, q] = s * Ap + c * Aq
                Ap, Aq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * Ap - s * Aq
                A[q, :] = s * Ap + c * Aq
                A[p, q] = A[q, p] = 0.0
                Vp, Vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = c * Vp - s * Vq
                V[:, q] = s * Vp + c * Vq
    else:
        raise ConvergenceError("Jacobi sweeps did not converge")
    w = np.diag(A).copy()
    order = np.argsort(-w, kind="stable")
    return w[order], V[:, order]


# --------------------------------------------------------------------------
# Dormand-Prince 5(4)

_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array(
    [5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40]
)
_E = _B5 - _B4


@dataclass(frozen=True)
class IntegratorConfig:
    """Tolerances for :func:`integrate_linear`.

    ``fixed_step`` switches off adaptivity: every segment is cut into steps
    of (at most) that length in ``|dz|``.
    """

    rel_tol: float = 1e-11
    abs_tol: float = 1e-13
    max_step: float = math.inf
    method: str = "dopri5"
    fixed_step: float | None = None

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("integrator tolerances must be positive")
        if self.method != "dopri5":
            raise ValueError(f"unknown integrator method {self.method!r}")


@dataclass
class Trajectory:
    vertices: list[complex]
    states: list[np.ndarray]
    error_estimate: float
    n_steps: int
    n_rejected: int = 0

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]


def _dp_step(f, s, y, h):
    k = []
    for i in range(7):
        yi = y
        for j, a in enumerate(_A[i]):
            if a:
                yi = yi + h * a * k[j]
        k.append(f(s + _C[i] * h, yi))
    y5 = y
    for b, ki in zip(_B5, k):
        if b:
            y5 = y5 + h * b * ki
    err = h * sum(e * ki for e, ki in zip(_E, k) if e)
    return y5, err


def _integrate_segment(system, p, q, y, cfg: IntegratorConfig):
    dz = q - p
    length = abs(dz)
    if length == 0:
        return y, 0.0, 0, 0

    def f(s, v):
        return dz * (system(p + s * dz) @ v)

    if cfg.fixed_step is not None:
        n = max(1, math.ceil(length / cfg.fixed_step))
        h = 1.0 / n
        total_err = 0.0
        for i in range(n):
            y, err = _dp_step(f, i * h, y, h)
            total_err += float(np.max(np.abs(err)))
        return y, total_err, n, 0

    s = 0.0
    h_max = min(1.0, cfg.max_step / length)
    h = min(h_max, 0.01)
    total_err = 0.0
    steps = rejected = 0
    while s < 1.0:
        h = min(h, 1.0 - s)
        if h < 1e-14:
            raise IntegrationError(f"step size underflow at z = {p + s * dz}")
        y_new, err = _dp_step(f, s, y, h)
        scale = cfg.abs_tol + cfg.rel_tol * np.maximum(np.abs(y), np.abs(y_new))
        e = float(np.sqrt(np.mean(np.abs(err / scale) ** 2)))
        if not np.isfinite(e):
            e = math.inf
        if e <= 1.0:
            s += h
            y = y_new
            total_err += float(np.max(np.abs(err)))
            steps += 1
            fac = 5.0 if e == 0 else min(5.0, max(0.2, 0.9 * e ** -0.2))
            h = min(h * fac, h_max)
        else:
            rejected += 1
            h *= max(0.2, 0.9 * e ** -0.2) if np.isfinite(e) else 0.2
    return y, total_err, steps, rejected


def integrate_linear(
    system: Callable[[complex], np.ndarray],
    y0,
    path: Sequence[complex],
    cfg: IntegratorConfig | None = None,
) -> Trajectory:
    """Integrate ``dy/dz = A(z) y`` along the polygon through ``path``.

    Parameters
    ----------
    system : callable
        Returns the coefficient matrix ``A(z)``.
    y0 : array_like
        Initial vector, or a matrix whose columns are integrated together
        (a fundamental matrix).
    path : sequence of complex
        Polygon vertices; a real interval is ``[a, b]``.
    cfg : IntegratorConfig, optional

    Returns
    -------
    Trajectory
        States at every vertex and the accumulated local error estimate.
    """
    cfg = cfg or IntegratorConfig()
    verts = [complex(v) for v in path]
    if len(verts) < 2:
        raise ValueError("path needs at least two vertices")
    y = np.array(y0, dtype=complex)
    states = [y.copy()]
    err_total = 0.0
    steps = rejected = 0
    for p, q in zip(verts[:-1], verts[1:]):
        y, err, n, nr = _integrate_segment(system, p, q, y, cfg)
        err_total += err
        steps += n
        rejected += nr
        states.append(y.copy())
    return Trajectory(verts, states, err_total, steps, rejected)


# --------------------------------------------------------------------------
# Monodromy of w'' = r(z) w

@dataclass
class MonodromyResult:
    base_point: complex
    loop: object
    radius: float
    matrix: np.ndarray
    det_defect: float
    error_estimate: float = 0.0
    extra: dict = field(default_factory=dict)

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.matrix))


def circle_path(center: complex, radius: float, n_segments: int = 32, start_angle: float = 0.0):
    return [
        center + radius * cmath.exp(1j * (start_angle + 2 * math.pi * k / n_segments))
        for k in range(n_segments + 1)
    ]


def reduced_system(r) -> Callable[[complex], np.ndarray]:
    """Companion matrix of ``w'' = r(z) w`` for a rational ``r``."""
    num = [complex(float(c)) for c in r.num.coeffs]
    den = [complex(float(c)) for c in r.den.coeffs]

    def horner(cs, z):
        acc = 0j
        for c in reversed(cs):
            acc = acc * z + c
        return acc

    def A(z):
        return np.array([[0.0, 1.0], [horner(num, z) / horner(den, z), 0.0]], dtype=complex)

    return A


def monodromy(
    req,
    singularity,
    radius: float,
    cfg: IntegratorConfig | None = None,
    n_segments: int = 32,
    start_angle: float = 0.0,
) -> MonodromyResult:
    """Monodromy matrix of ``w'' = r w`` for one positive loop.

    ``req`` needs a rational ``r`` and ``finite_singularities()``;
    ``singularity`` is the loop center.  The matrix maps initial data
    ``(w, w')`` at the base point ``center + radius e^{i start_angle}`` to the
    continued data, columns being the continued standard basis solutions.
    """
    center = complex(float(singularity)) if not isinstance(singularity, complex) else singularity
    others = [complex(float(s)) for s in req.finite_singularities()]
    inner = radius * math.cos(math.pi / n_segments)
    for s in others:
        dist = abs(s - center)
        if dist < 1e-12:
            continue
        if dist <= radius * 1.05:
            raise ValueError(
                f"radius {radius} infeasible: singularity at {s} lies within the loop"
            )
    if inner <= 0:
        raise ValueError("radius must be positive")
    path = circle_path(center, radius, n_segments, start_angle)
    A = reduced_system(req.r)
    cfg = cfg or IntegratorConfig()
    # propagate segment by segment; det is multiplicative, and the per-segment
    # propagators stay well conditioned even when M itself is not
    M = np.eye(2, dtype=complex)
    det = 1.0 + 0j
    err = 0.0
    for p, q in zip(path[:-1], path[1:]):
        y, e, _, _ = _integrate_segment(A, complex(p), complex(q), np.eye(2, dtype=complex), cfg)
        M = y @ M
        det *= np.linalg.det(y)
        err += e
    return MonodromyResult(
        base_point=path[0],
        loop=singularity,
        radius=radius,
        matrix=M,
        det_defect=abs(det - 1.0),
        error_estimate=err,
        extra={"det_direct_defect": float(abs(np.linalg.det(M) - 1.0))},
    )
