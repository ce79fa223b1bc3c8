import math
from fractions import Fraction as F

import numpy as np
import pytest
import sympy as sp

from nbody_galois.central_config import build_cmatrix, solve_moulton, spectrum
from nbody_galois.exactmath import INFINITY, QuadExt
from nbody_galois.homographic import J2, block, grad_angular_momentum, grad_energy, orbit_from_levels, sample_homographic
from nbody_galois.variational import (
    ConstructionError,
    SubsystemParams,
    diagonalizer,
    reduce_to_normal_form,
    scalar_ode_circular,
    scalar_ode_elliptic,
    scaled_hessian,
    tangent_lift,
    tschauner_split,
)
from nbody_galois.variational.hessian import mass_matrix
from nbody_galois.variational.scalar import l_circular


def to_sympy(x):
    if isinstance(x, QuadExt):
        return sp.Rational(x.a.numerator, x.a.denominator) + sp.Rational(x.b.numerator, x.b.denominator) * sp.sqrt(x.d)
    x = F(x)
    return sp.Rational(x.numerator, x.denominator)


def closed_r_generic(d, e, D, z):
    """The generic reduced coefficient, typed in from the closed form."""
    z3 = -(d * (9 * d + 17) + D + 2 * e**2 + 4) / (8 * (2 * d + 3))
    return (
        -d / ((e**2 - 1) * z)
        - sp.Rational(3, 16) / (z - e - 1) ** 2
        - sp.Rational(3, 16) / (z + e - 1) ** 2
        + sp.Rational(3, 4) / (z - z3) ** 2
        - (6 * d + 5 * z + 3) / (2 * (z - e - 1) * (z + e - 1) * (z - z3))
        + (33 * (e**2 - 1) + 8 * d * (z - 2)) / (8 * (e**2 - 1) * (z - e - 1) * (z + e - 1))
    )


def closed_r_circular(d, D, z):
    l = d * (9 * d - 3 * D + 17) - 4 * D + 8 * (2 * d + 3) * z + 4
    return (
        48 * (2 * d + 3) ** 2 / l**2
        - 4 * (2 * d + 3) * (6 * d + 5 * z + 3) / ((z - 1) ** 2 * l)
        + (4 * d + 15 * z) / (4 * (z - 1) ** 2 * z)
    )


def closed_r_branch(branch, d, z):
    if branch == "E1":
        return (
            -(8 * d + 3) / (16 * z**2)
            - sp.Rational(3, 16) / (z - 2) ** 2
            + sp.Rational(3, 4) / ((d * (9 * d + 17) + 6) / (8 * d + 12) + z) ** 2
            + (d * (d * (36 * d + 173) + 201) + 4 * (2 * d + 3) * (4 * d + 13) * z + 54)
            / (8 * (z - 2) * z * (d * (9 * d + 17) + 4 * (2 * d + 3) * z + 6))
        )
    if branch == "E3d4":
        return (
            -d / (3 * (d + 1) * (3 * d + 5) * z)
            - sp.Rational(3, 16) / (z + 3 + 3 * d) ** 2
            - sp.Rational(3, 16) / (z - 5 - 3 * d) ** 2
            + (171 * d**2 + 8 * d * (z + 55) + 285) / (24 * (d + 1) * (3 * d + 5) * (z + 3 + 3 * d) * (z - 5 - 3 * d))
        )
    return (
        -4 * d / (3 * (3 * d**2 + 8 * d + 4) * z)
        - sp.Rational(3, 16) / (z - 3 * (d + 2) / 2) ** 2
        + sp.Rational(5, 16) / (z + (3 * d + 2) / 2) ** 2
        + (d * (135 * d + 32 * z + 296) + 180) / (24 * (d + 2) * (3 * d + 2) * (z - 3 * (d + 2) / 2) * (z + (3 * d + 2) / 2))
    )


SAMPLE_Z = [F(1, 7), F(-5, 3), F(11, 4)]


@pytest.mark.parametrize("delta,e", [(F(1), F(1, 2)), (F(7, 5), F(1, 2)), (F(1, 10), F(9, 10)), (F(10), F(1, 4))])
def test_reduced_r_matches_closed_form_generic(delta, e):
    p = SubsystemParams(delta, e)
    req = reduce_to_normal_form(scalar_ode_elliptic(p))
    D = sp.sqrt(to_sympy(p.DeltaSq))
    for z in SAMPLE_Z:
        ref = closed_r_generic(to_sympy(delta), to_sympy(e), D, to_sympy(z))
        assert sp.simplify(to_sympy(req.r(z)) - ref) == 0


@pytest.mark.parametrize("delta", [F(1, 10), F(1), F(10)])
def test_reduced_r_matches_closed_form_circular(delta):
    p = SubsystemParams(delta, circular=True)
    req = reduce_to_normal_form(scalar_ode_circular(p))
    D = sp.sqrt(to_sympy(p.DeltaSq))
    for z in SAMPLE_Z:
        ref = closed_r_circular(to_sympy(delta), D, to_sympy(z))
        assert sp.simplify(to_sympy(req.r(z)) - ref) == 0


@pytest.mark.parametrize("branch,delta,e", [("E1", F(1), F(1)), ("E1", F(3), F(1)), ("E3d4", F(1), F(7)), ("TwoE3d4", F(2), F(5))])
def test_reduced_r_matches_branch_forms(branch, delta, e):
    req = reduce_to_normal_form(scalar_ode_elliptic(SubsystemParams(delta, e)))
    for z in SAMPLE_Z:
        ref = closed_r_branch(branch, to_sympy(delta), to_sympy(z))
        assert sp.simplify(to_sympy(req.r(z)) - ref) == 0


def test_generic_inventory():
    req = reduce_to_normal_form(scalar_ode_elliptic(SubsystemParams(F(7, 5), F(1, 2))))
    alphas = [s.alpha for s in req.singularities]
    assert alphas == [0, F(-3, 16), F(-3, 16), F(3, 4), 2]
    assert [str(s.exponent_difference) for s in req.singularities] == ["1", "1/2", "1/2", "2", "3"]
    assert [s.pole_order for s in req.singularities] == [1, 2, 2, 2, 2]
    assert req.singularities[-1].location is INFINITY
    assert req.fuchsian


def test_circular_l_polynomial():
    l = l_circular(SubsystemParams(1, circular=True))
    s5 = QuadExt(F(0), F(1), 5)
    assert l[1] == 40
    assert l[0] == 30 - 14 * s5


def test_closed_forms_cross_checked(monkeypatch):
    # the constructor compares the closed form with the derivation from B+
    from nbody_galois.variational import scalar

    p = SubsystemParams(F(3, 2), F(2, 3))
    b1, b0, _ = scalar.closed_form_elliptic(p)
    c1, c0 = scalar.derived_elliptic(p)
    assert (b1, b0) == (c1, c0)
    orig = scalar.closed_form_elliptic

    def tampered(params):
        b1, b0, l = orig(params)
        return b1, b0 + 1, l

    monkeypatch.setattr(scalar, "closed_form_elliptic", tampered)
    with pytest.raises(ConstructionError):
        scalar.scalar_ode_elliptic(p)


@pytest.mark.parametrize("params", [SubsystemParams(F(7, 5), F(1, 2)), SubsystemParams(F(1, 3), F(5, 2)), SubsystemParams(F(1), circular=True)])
def test_gauge_identity(params):
    g = tschauner_split(params)
    assert g.symbolic_identity and g.symbolic_det
    for nu in np.linspace(0.1, 6.0, 7):
        assert g.numeric_residual(nu) < 1e-10
        assert abs(np.linalg.det(g.T(nu)) - g.det_expected(nu)) < 1e-10


def test_structural_identities():
    m = [1.0, 2.0, 3.0, 0.5]
    cfg = solve_moulton(m)
    Ht = scaled_hessian(cfg)
    n = cfg.n
    Mh = mass_matrix(cfg.masses, 0.5)
    Jh = block(J2, n)
    s = cfg.positions()
    a = np.tile([1.0, 0.0], n)
    assert np.allclose(Ht @ Mh @ s, -2 * Mh @ s, atol=1e-10)
    assert np.allclose(Ht @ Mh @ Jh @ s, Mh @ Jh @ s, atol=1e-10)
    assert np.allclose(Ht @ Mh @ a, 0, atol=1e-10)
    C = build_cmatrix(cfg)
    D = diagonalizer(C, cfg, spectrum(C, cfg.masses))
    T = D.T
    assert np.allclose(T @ T.T, np.eye(2 * n), atol=1e-10)
    assert np.allclose(T.T @ Jh @ T, Jh, atol=1e-10)
    assert np.allclose(T.T @ Ht @ T, np.diag(D.expected_diagonal), atol=1e-10)


def test_tangency_of_generic_blocks():
    cfg = solve_moulton([1.0, 2.0, 3.0, 0.5])
    C = build_cmatrix(cfg)
    D = diagonalizer(C, cfg, spectrum(C, cfg.masses))
    orbit = orbit_from_levels(F(-3, 8), 1)
    rng = np.random.default_rng(5)
    n = cfg.n
    for nu in rng.uniform(0, 2 * math.pi, 5):
        Y = np.zeros(2 * n)
        Yp = np.zeros(2 * n)
        Y[: 2 * (n - 2)] = rng.standard_normal(2 * (n - 2))
        Yp[: 2 * (n - 2)] = rng.standard_normal(2 * (n - 2))
        R, P = tangent_lift(cfg, orbit, nu, Y, Yp, D)
        pt = sample_homographic(cfg, orbit, nu)
        gHr, gHp = grad_energy(cfg.masses, pt)
        gCr, gCp = grad_angular_momentum(pt)
        assert abs(gHr @ R + gHp @ P) < 1e-9
        assert abs(gCr @ R + gCp @ P) < 1e-9
