import math
from fractions import Fraction as F

import numpy as np
import pytest

from nbody_galois.central_config import solve_moulton
from nbody_galois.homographic import (
    CIRCULAR,
    ECCENTRIC_COMPLEX,
    ECCENTRIC_REAL,
    MOMENTUM_ZERO,
    angular_momentum,
    check_hc_independence,
    energy,
    newton_residual,
    orbit_from_levels,
    sample_homographic,
)


def test_case_tags():
    assert orbit_from_levels(F(-3, 8), 1).case_tag == ECCENTRIC_REAL
    assert orbit_from_levels(F(-3, 8), 1).e == F(1, 2)
    assert orbit_from_levels(F(-1, 2), 1).case_tag == CIRCULAR
    assert orbit_from_levels(1, 0).case_tag == MOMENTUM_ZERO
    assert orbit_from_levels(-1, 1).case_tag == ECCENTRIC_COMPLEX


def test_irrational_eccentricity_bracket():
    o = orbit_from_levels(F(-1, 4), 1)  # e^2 = 1/2
    assert not o.e_exact
    assert o.e_lo ** 2 < F(1, 2) < o.e_hi ** 2
    assert o.e_hi - o.e_lo < F(1, 10**11)


@pytest.mark.parametrize("masses,h,c", [([1, 1, 1], F(-3, 8), F(1)), ([1, 2, 3], F(-1, 5), F(3, 2)), ([1, 1, 1], F(-1, 2), F(1))])
def test_integrals_along_orbit(masses, h, c):
    cfg = solve_moulton(masses)
    orbit = orbit_from_levels(h, c)
    for nu in np.linspace(0, 2 * math.pi, 7):
        pt = sample_homographic(cfg, orbit, nu)
        assert abs(energy(cfg.masses, pt) / cfg.I_value - float(h)) < 1e-12
        assert abs(angular_momentum(pt) / cfg.I_value - float(c)) < 1e-12


def test_newton_equations_hold():
    cfg = solve_moulton([1, 2, 3])
    orbit = orbit_from_levels(F(-3, 8), 1)
    for nu in (0.0, 1.0, 2.5, 4.0):
        assert newton_residual(cfg, orbit, nu) < 1e-7


def test_hc_independence_rank():
    cfg = solve_moulton([1, 1, 1])
    pt = sample_homographic(cfg, orbit_from_levels(F(-3, 8), 1), 0.7)
    assert check_hc_independence(pt, cfg.masses) == 2
    pt = sample_homographic(cfg, orbit_from_levels(F(-1, 2), 1), 0.7)
    assert check_hc_independence(pt, cfg.masses) == 1
