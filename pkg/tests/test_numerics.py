import math
from fractions import Fraction as F

import numpy as np
import pytest

from nbody_galois.exactmath import Poly, RatFunc
from nbody_galois.numerics import (
    ConvergenceError,
    IntegratorConfig,
    circle_path,
    integrate_linear,
    jacobi_eigen,
    monodromy,
    newton_solve,
    reduced_system,
)
from nbody_galois.variational import SubsystemParams, reduce_to_normal_form, scalar_ode_elliptic
from nbody_galois.variational.scalar import equation_from_r


def test_newton_sqrt2():
    x = newton_solve(lambda v: v * v - 2, lambda v: 2 * v, 1.0)
    assert abs(x - math.sqrt(2)) < 1e-14


def test_newton_singular_jacobian():
    with pytest.raises(ConvergenceError):
        newton_solve(lambda v: v * v + 1, lambda v: 2 * v, 0.0)


def test_jacobi_matches_numpy():
    rng = np.random.default_rng(3)
    A = rng.standard_normal((6, 6))
    S = A + A.T
    w, V = jacobi_eigen(S)
    assert np.allclose(w, np.sort(np.linalg.eigvalsh(S))[::-1], atol=1e-12)
    assert np.allclose(V.T @ V, np.eye(6), atol=1e-12)
    assert np.allclose(S @ V, V * w, atol=1e-11)


def test_jacobi_rejects_nonsymmetric():
    with pytest.raises(ValueError):
        jacobi_eigen(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_rotation_returns_to_identity():
    A = lambda z: np.array([[0.0, 1.0], [-1.0, 0.0]])
    traj = integrate_linear(A, np.eye(2), [0.0, 2 * math.pi], IntegratorConfig(rel_tol=1e-13, abs_tol=1e-15))
    assert np.max(np.abs(traj.final - np.eye(2))) < 1e-10


def test_fixed_step_order():
    """Halving the step cuts the error by at least 2^(5-1)."""
    A = lambda z: np.array([[0.0, 1.0], [-1.0, 0.0]])
    exact = np.array([[math.cos(3.0), math.sin(3.0)], [-math.sin(3.0), math.cos(3.0)]])
    errs = []
    for h in (0.4, 0.2, 0.1):
        cfg = IntegratorConfig(fixed_step=h / 3.0)
        traj = integrate_linear(A, np.eye(2), [0.0, 3.0], cfg)
        errs.append(np.max(np.abs(traj.final - exact)))
    assert errs[0] / errs[1] >= 16 and errs[1] / errs[2] >= 16


def test_wronskian_constant_on_regular_path():
    p = SubsystemParams(F(7, 5), F(1, 2))
    req = reduce_to_normal_form(scalar_ode_elliptic(p))
    path = [0.25 + 0.3j, 0.8 + 0.5j, 1.1 - 0.2j, 0.3 - 0.4j]
    traj = integrate_linear(reduced_system(req.r), np.eye(2), path, IntegratorConfig(rel_tol=1e-12, abs_tol=1e-14))
    dets = [np.linalg.det(Y) for Y in traj.states]
    assert max(abs(d - 1) for d in dets) < 1e-9


def test_monodromy_of_power_solution_is_trivial():
    # w'' = 2/z^2 w has solutions z^2 and z^-1: no monodromy
    r = RatFunc(Poly.const(2), Poly((0, 0, 1)))
    req = equation_from_r(r, [F(0)])
    res = monodromy(req, 0, 0.5, IntegratorConfig(rel_tol=1e-12, abs_tol=1e-14))
    assert np.max(np.abs(res.matrix - np.eye(2))) < 1e-9
    assert res.det_defect < 1e-10


def test_monodromy_basis_independence():
    p = SubsystemParams(F(1), F(1, 2))
    req = reduce_to_normal_form(scalar_ode_elliptic(p))
    cfg = IntegratorConfig(rel_tol=1e-12, abs_tol=1e-14)
    traces = [monodromy(req, 0, 0.2, cfg, start_angle=a).trace for a in (0.0, 1.0, 2.5)]
    assert max(abs(t - traces[0]) for t in traces) < 1e-6


def test_monodromy_rejects_enclosed_singularity():
    p = SubsystemParams(F(1), F(1, 2))
    req = reduce_to_normal_form(scalar_ode_elliptic(p))
    with pytest.raises(ValueError):
        monodromy(req, 0, 0.6)


def test_circle_path_closes():
    pts = circle_path(1 + 1j, 0.5, 16)
    assert len(pts) == 17 and abs(pts[0] - pts[-1]) < 1e-15
