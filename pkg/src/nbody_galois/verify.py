"""Numerical invariant suites behind the ``verify`` command.

Each check returns a CheckResult; a suite never raises on a failed check,
so the caller can report the first failure by name.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .central_config import MassSystem, build_cmatrix, solve_moulton, spectrum
from .exactmath import INFINITY
from .homographic import (
    CIRCULAR,
    ECCENTRIC_REAL,
    J2,
    block,
    grad_angular_momentum,
    grad_energy,
    orbit_from_levels,
    sample_homographic,
)
from .numerics import IntegratorConfig, monodromy
from .variational.hessian import diagonalizer, mass_matrix, reserved_vectors, scaled_hessian, tangent_lift
from .variational.scalar import reduce_to_normal_form, scalar_ode_circular, scalar_ode_elliptic
from .variational.subsystem import SubsystemParams, tschauner_split

SUITES = ("eigenvectors", "gauge", "tangency", "monodromy")

STRUCT_TOL = 1e-10
GAUGE_TOL = 1e-10
TANGENCY_TOL = 1e-9
DET_TOL = 1e-8


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    value: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(self.value < self.tol)


@dataclass
class Instance:
    masses: Sequence[float]
    h: Fraction
    c: Fraction
    ordering: Sequence[int] | None = None
    seed: int = 0
    perturb_hessian: float = 0.0


def _perturbation(n2: int) -> np.ndarray:
    """Fixed symmetric unit-norm direction used to corrupt the Hessian."""
    E = np.add.outer(np.arange(n2), np.arange(n2)).astype(float) + 1.0
    return E / np.linalg.norm(E, 2)


def eigenvector_checks(inst: Instance) -> list[CheckResult]:
    ms = MassSystem(inst.masses)
    config = solve_moulton(ms, inst.ordering)
    Cm = build_cmatrix(config)
    Ht = scaled_hessian(config)
    if inst.perturb_hessian:
        Ht = Ht + inst.perturb_hessian * _perturbation(len(Ht))
    n = config.n
    Mh = mass_matrix(ms, 0.5)
    Jh = block(J2, n)
    s = config.positions()
    a = np.tile([1.0, 0.0], n)
    u_s, u_js = Mh @ s, Mh @ Jh @ s
    u_a = Mh @ a
    out = [
        CheckResult("eigenvectors", "H M^1/2 s = -2 M^1/2 s", float(np.max(np.abs(Ht @ u_s + 2 * u_s))), STRUCT_TOL),
        CheckResult("eigenvectors", "H M^1/2 J s = M^1/2 J s", float(np.max(np.abs(Ht @ u_js - u_js))), STRUCT_TOL),
        CheckResult("eigenvectors", "H M^1/2 a = 0", float(np.max(np.abs(Ht @ u_a))), STRUCT_TOL),
    ]
    D = diagonalizer(Cm, config, spectrum(Cm, ms))
    T = D.T
    I = np.eye(2 * n)
    out.append(CheckResult("eigenvectors", "T T^t = I", float(np.max(np.abs(T @ T.T - I))), STRUCT_TOL))
    out.append(CheckResult("eigenvectors", "T^t J T = J", float(np.max(np.abs(T.T @ Jh @ T - Jh))), STRUCT_TOL))
    out.append(CheckResult(
        "eigenvectors", "T^t H T = diag(-2 lambda, lambda)",
        float(np.max(np.abs(T.T @ Ht @ T - np.diag(D.expected_diagonal)))), STRUCT_TOL,
    ))
    return out


def _params_for(inst: Instance) -> list[SubsystemParams]:
    orbit = orbit_from_levels(inst.h, inst.c)
    ms = MassSystem(inst.masses)
    config = solve_moulton(ms, inst.ordering)
    spec = spectrum(build_cmatrix(config), ms)
    if orbit.case_tag == CIRCULAR:
        return [SubsystemParams(rd.value, circular=True) for rd in spec.delta_rationalized]
    if orbit.case_tag != ECCENTRIC_REAL:
        raise ValueError(f"no homographic orbit to verify for case {orbit.case_tag}")
    return [SubsystemParams(rd.value, orbit.e) for rd in spec.delta_rationalized]


def gauge_checks(inst: Instance, n_nu: int = 20) -> list[CheckResult]:
    rng = np.random.default_rng(inst.seed)
    out = []
    for k, p in enumerate(_params_for(inst)):
        g = tschauner_split(p)
        out.append(CheckResult("gauge", f"delta_{k + 1} symbolic gauge identity", 0.0 if g.symbolic_identity else 1.0, 0.5))
        out.append(CheckResult("gauge", f"delta_{k + 1} symbolic det T", 0.0 if g.symbolic_det else 1.0, 0.5))
        nus = rng.uniform(0, 2 * math.pi, n_nu)
        worst = max(g.numeric_residual(float(nu)) for nu in nus)
        out.append(CheckResult("gauge", f"delta_{k + 1} numeric gauge residual", worst, GAUGE_TOL))
        det_err = max(abs(np.linalg.det(g.T(float(nu))) - g.det_expected(float(nu))) for nu in nus)
        out.append(CheckResult("gauge", f"delta_{k + 1} det T", float(det_err), GAUGE_TOL))
    return out


def tangency_checks(inst: Instance, n_nu: int = 10) -> list[CheckResult]:
    rng = np.random.default_rng(inst.seed + 1)
    ms = MassSystem(inst.masses)
    config = solve_moulton(ms, inst.ordering)
    Cm = build_cmatrix(config)
    D = diagonalizer(Cm, config, spectrum(Cm, ms))
    orbit = orbit_from_levels(inst.h, inst.c)
    n = config.n
    worst_H = worst_C = 0.0
    for nu in rng.uniform(0, 2 * math.pi, n_nu):
        nu = float(nu)
        Y = np.zeros(2 * n)
        Yp = np.zeros(2 * n)
        Y[: 2 * (n - 2)] = rng.standard_normal(2 * (n - 2))
        Yp[: 2 * (n - 2)] = rng.standard_normal(2 * (n - 2))
        R, P = tangent_lift(config, orbit, nu, Y, Yp, D)
        pt = sample_homographic(config, orbit, nu)
        gHr, gHp = grad_energy(ms, pt)
        gCr, gCp = grad_angular_momentum(pt)
        worst_H = max(worst_H, abs(gHr @ R + gHp @ P))
        worst_C = max(worst_C, abs(gCr @ R + gCp @ P))
    return [
        CheckResult("tangency", "dH (R, P) on blocks k <= n-2", float(worst_H), TANGENCY_TOL),
        CheckResult("tangency", "dC (R, P) on blocks k <= n-2", float(worst_C), TANGENCY_TOL),
    ]


def monodromy_checks(inst: Instance) -> list[CheckResult]:
    cfg = IntegratorConfig(rel_tol=1e-12, abs_tol=1e-14)
    out = []
    for k, p in enumerate(_params_for(inst)):
        ode = scalar_ode_circular(p) if p.circular else scalar_ode_elliptic(p)
        req = reduce_to_normal_form(ode)
        pts = [complex(s.location) for s in req.singularities if s.location is not INFINITY]
        for s, z in zip(req.singularities, pts):
            others = [abs(z - w) for w in pts if w != z]
            radius = min(others) / 3 if others else 0.5
            res = monodromy(req, z, radius, cfg)
            out.append(CheckResult(
                "monodromy", f"delta_{k + 1} det M at z = {s.location}", float(res.det_defect), DET_TOL,
            ))
    return out


def run_suites(inst: Instance, only: Sequence[str] | None = None) -> list[CheckResult]:
    chosen = SUITES if not only else tuple(only)
    for name in chosen:
        if name not in SUITES:
            raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    runners = {
        "eigenvectors": eigenvector_checks,
        "gauge": gauge_checks,
        "tangency": tangency_checks,
        "monodromy": monodromy_checks,
    }
    results: list[CheckResult] = []
    for name in chosen:
        results.extend(runners[name](inst))
    return results
