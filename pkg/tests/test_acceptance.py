"""Acceptance criteria, one test each.  Every test prints a single
``criterion N: PASS|FAIL`` line (visible with ``pytest -v -s`` or in the
uncaptured output below each test id)."""

import json
import math
from fractions import Fraction as F

import numpy as np
import pytest

from nbody_galois import cli
from nbody_galois.central_config import build_cmatrix, solve_moulton, spectrum
from nbody_galois.exactmath import INFINITY, Poly, RatFunc, qsign
from nbody_galois.homographic import J2, block, grad_angular_momentum, grad_energy, orbit_from_levels, sample_homographic
from nbody_galois.kovacic import (
    CIRCULAR,
    E1,
    E3D4,
    FOUND,
    NOT_SOLVABLE,
    TWO_E3D4,
    branch_dispatch,
    detect_log,
    enumerate_candidates,
    galois_verdict,
    verdict_for_equation,
)
from nbody_galois.numerics import IntegratorConfig, monodromy
from nbody_galois.variational import (
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
from nbody_galois.variational.scalar import equation_from_r


@pytest.fixture
def verdict_line(capsys):
    def emit(n, ok, detail=""):
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'}" + (f"  ({detail})" if detail else ""))
        assert ok, f"criterion {n}: {detail}"
    return emit


def elliptic(delta, e):
    return reduce_to_normal_form(scalar_ode_elliptic(SubsystemParams(delta, e)))


def test_criterion_01_generic_tables(verdict_line):
    bad = []
    for delta, e in [(F(7, 5), F(1, 2)), (F(1, 10), F(9, 10)), (F(10), F(1, 4))]:
        req = elliptic(delta, e)
        sing = req.singularities
        alphas = [s.alpha for s in sing]
        diffs = [s.exponent_difference for s in sing]
        sets = [sorted(x.value for x in s.kovacic_exponents()) for s in sing]
        cands = enumerate_candidates(req)
        ok = (
            alphas == [0, F(-3, 16), F(-3, 16), F(3, 4), 2]
            and diffs == [1, F(1, 2), F(1, 2), 2, 3]
            and sets == [[1], [F(1, 4), F(3, 4)], [F(1, 4), F(3, 4)], [F(-1, 2), F(3, 2)], [-1, 2]]
            and sing[-1].location is INFINITY
            and sorted(c.d for c in cands) == [0, 1]
        )
        if not ok:
            bad.append((delta, e))
    verdict_line(1, not bad, f"failing pairs {bad}" if bad else "alpha, exponent tables and two candidates d = 0, 1")


def test_criterion_02_generic_grid(verdict_line):
    bad = []
    for delta in (F(1, 10), F(7, 5), F(1), F(10)):
        for e in (F(1, 4), F(1, 2), F(9, 10)):
            v = galois_verdict(SubsystemParams(delta, e))
            ok = (
                v.conclusion == NOT_SOLVABLE
                and len(v.candidates) == 2
                and all(c.polynomial is None for c in v.candidates)
            )
            if not ok:
                bad.append((delta, e))
    verdict_line(2, not bad, f"failing cells {bad}" if bad else "12 cells not solvable")


def test_criterion_03_branches(verdict_line):
    bad = []
    cases = [(F(1), F(1), E1), (F(1), F(7), E3D4), (F(2), F(5), TWO_E3D4)]
    for delta, e, branch in cases:
        p = SubsystemParams(delta, e)
        v = galois_verdict(p)
        if branch_dispatch(p) != branch or v.branch != branch or v.conclusion != NOT_SOLVABLE:
            bad.append((delta, e, "verdict"))
    # branch exponent data
    e1 = elliptic(1, 1)
    lr = detect_log(e1, INFINITY)
    if not (lr.exponent_difference == 3 and lr.g_s == F(1 * 2 * 5, 9)):
        bad.append("E1 g3")
    # alpha_0 = -(8 delta + 3)/16 at z = 0, so 1 + 4 alpha_0 = (1 - 8 delta)/4
    if [s.alpha for s in e1.singularities] != [F(-11, 16), F(-3, 16), F(3, 4), 2]:
        bad.append("E1 alphas")
    if [str(s.location) for s in e1.singularities] != ["0", "2", "-8/5", "inf"]:
        bad.append("E1 points")
    if enumerate_candidates(e1):
        bad.append("E1 candidates")
    e3 = elliptic(1, 7)
    if [s.exponent_difference for s in e3.singularities] != [1, F(1, 2), F(1, 2), 3]:
        bad.append("E3d4 exponents")
    te = elliptic(2, 5)
    # z = -(3 delta + 2)/2 carries alpha = 5/16
    if [s.exponent_difference for s in te.singularities] != [1, F(3, 2), F(1, 2), 3]:
        bad.append("TwoE3d4 exponents")
    c = enumerate_candidates(te)
    if len(c) != 1 or c[0].d != 1:
        bad.append("TwoE3d4 candidates")
    verdict_line(3, not bad, f"failures {bad}" if bad else "E1, E3d4, TwoE3d4 dispatched and not solvable")


def test_criterion_04_circular(verdict_line):
    bad = []
    for delta in (F(1, 10), F(1), F(10)):
        p = SubsystemParams(delta, circular=True)
        if qsign(1 - delta - p.Delta) != -1:
            bad.append((delta, "sign"))
        req = reduce_to_normal_form(scalar_ode_circular(p))
        if enumerate_candidates(req):
            bad.append((delta, "candidates"))
        if not detect_log(req, F(0)).log_present:
            bad.append((delta, "log at z0"))
        v = galois_verdict(p)
        if v.branch != CIRCULAR or v.conclusion != NOT_SOLVABLE:
            bad.append((delta, "verdict"))
        if v.diagnostics["disc_Q_zero"] or v.diagnostics["resultant_zero"]:
            bad.append((delta, "degenerate"))
    verdict_line(4, not bad, f"failures {bad}" if bad else "negative sign, no candidates, log at 0, nondegenerate")


def test_criterion_05_central_configurations(verdict_line):
    bad = []
    a2 = (1 / 4) ** (1 / 3)
    if np.max(np.abs(np.sort(solve_moulton([1, 1]).x) - [-a2, a2])) >= 1e-10:
        bad.append("n=2")
    cfg = solve_moulton([1, 1, 1])
    a3 = (5 / 4) ** (1 / 3)
    if np.max(np.abs(cfg.x - [-a3, 0, a3])) >= 1e-10:
        bad.append("n=3")
    lam = spectrum(build_cmatrix(cfg), cfg.masses).lambdas
    if np.max(np.abs(np.asarray(lam) - [12 / 5, 1, 0])) >= 1e-10:
        bad.append("n=3 spectrum")
    rng = np.random.default_rng(2024)
    for trial in range(20):
        m = rng.uniform(0.1, 10.0, 3 + trial % 2)
        c = solve_moulton(m)
        lam = spectrum(build_cmatrix(c), c.masses).lambdas
        if not (abs(lam[-1]) < 1e-8 and abs(lam[-2] - 1) < 1e-8 and np.all(lam[:-2] > 1 + 1e-8)):
            bad.append(("conley", tuple(m)))
    verdict_line(5, not bad, f"failures {bad}" if bad else "closed forms and 20 Conley spectra")


def test_criterion_06_structural_identities(verdict_line):
    rng = np.random.default_rng(6)
    worst = 0.0
    for trial in range(6):
        m = rng.uniform(0.2, 5.0, 3 + trial % 3)
        cfg = solve_moulton(m)
        n = cfg.n
        Ht = scaled_hessian(cfg)
        Mh = mass_matrix(cfg.masses, 0.5)
        Jh = block(J2, n)
        s = cfg.positions()
        a = np.tile([1.0, 0.0], n)
        T = diagonalizer(build_cmatrix(cfg), cfg, spectrum(build_cmatrix(cfg), cfg.masses))
        Tm = T.T
        checks = [
            Ht @ Mh @ s + 2 * Mh @ s,
            Ht @ Mh @ Jh @ s - Mh @ Jh @ s,
            Ht @ Mh @ a,
            Tm @ Tm.T - np.eye(2 * n),
            Tm.T @ Jh @ Tm - Jh,
            Tm.T @ Ht @ Tm - np.diag(T.expected_diagonal),
        ]
        worst = max(worst, max(float(np.max(np.abs(c))) for c in checks))
    verdict_line(6, worst < 1e-10, f"max residual {worst:.2e}")


def test_criterion_07_gauge(verdict_line):
    rng = np.random.default_rng(7)
    worst = 0.0
    symbolic = True
    for _ in range(5):
        delta = F(int(rng.integers(1, 60)), int(rng.integers(1, 12)))
        e = F(int(rng.integers(1, 40)), int(rng.integers(1, 12)))
        g = tschauner_split(SubsystemParams(delta, e))
        symbolic &= g.symbolic_det and g.symbolic_identity
        for nu in rng.uniform(0, 2 * math.pi, 20):
            worst = max(worst, g.numeric_residual(nu))
    verdict_line(7, worst < 1e-10 and symbolic, f"max residual {worst:.2e}, symbolic det identity {symbolic}")


def test_criterion_08_tangency(verdict_line):
    rng = np.random.default_rng(8)
    worst = 0.0
    for masses, h, c in [([1.0, 2.0, 3.0, 0.5], F(-3, 8), F(1)), ([1.0, 1.0, 1.0], F(-1, 5), F(3, 2))]:
        cfg = solve_moulton(masses)
        C = build_cmatrix(cfg)
        D = diagonalizer(C, cfg, spectrum(C, cfg.masses))
        orbit = orbit_from_levels(h, c)
        n = cfg.n
        for nu in rng.uniform(0, 2 * math.pi, 10):
            Y = np.zeros(2 * n)
            Yp = np.zeros(2 * n)
            Y[: 2 * (n - 2)] = rng.standard_normal(2 * (n - 2))
            Yp[: 2 * (n - 2)] = rng.standard_normal(2 * (n - 2))
            R, P = tangent_lift(cfg, orbit, nu, Y, Yp, D)
            pt = sample_homographic(cfg, orbit, nu)
            gHr, gHp = grad_energy(cfg.masses, pt)
            gCr, gCp = grad_angular_momentum(pt)
            worst = max(worst, abs(gHr @ R + gHp @ P), abs(gCr @ R + gCp @ P))
    verdict_line(8, worst < 1e-9, f"max |dH|, |dC| = {worst:.2e}")


def test_criterion_09_monodromy(verdict_line):
    cfg = IntegratorConfig(rel_tol=1e-12, abs_tol=1e-14)
    worst_det = 0.0
    detail = []
    for p in (SubsystemParams(F(7, 5), F(1, 2)), SubsystemParams(F(1), circular=True)):
        ode = scalar_ode_circular(p) if p.circular else scalar_ode_elliptic(p)
        req = reduce_to_normal_form(ode)
        pts = [complex(s.location) for s in req.singularities if s.location is not INFINITY]
        for z in pts:
            radius = min(abs(z - w) for w in pts if w != z) / 3
            worst_det = max(worst_det, monodromy(req, z, radius, cfg).det_defect)
    req = elliptic(F(7, 5), F(1, 2))
    M = monodromy(req, 0, 0.15, cfg).matrix
    N = M - np.eye(2)
    off = float(np.max(np.abs(N)))
    nil = float(np.max(np.abs(N @ N)))
    log_ok = detect_log(req, F(0)).log_present
    ok = worst_det < 1e-8 and off > 1e-3 and nil < 1e-8 * max(1.0, off**2) and log_ok
    detail.append(f"max |det M - 1| {worst_det:.1e}, |M - I| {off:.2e}, |(M - I)^2| {nil:.1e}, log {log_ok}")
    verdict_line(9, ok, "; ".join(detail))


def test_criterion_10_positive_controls(verdict_line):
    found = []
    for a in (F(2), F(3), F(5, 2)):
        r = RatFunc(Poly.const(a * (a - 1)), Poly((0, 0, 1)))
        v = verdict_for_equation(equation_from_r(r, [F(0)]))
        found.append(v.conclusion == FOUND and v.witness is not None)
    verdict_line(10, all(found), f"witnesses found {found}")


def test_criterion_11_end_to_end(verdict_line, capsys):
    got = []
    for h, c in (("-0.375", "1"), ("-0.5", "1"), ("-0.375", "0")):
        code = cli.main(["analyze", "--masses", "1,1,1", "--h", h, "--c", c])
        out = capsys.readouterr().out
        got.append((code, json.loads(out)["overall"]))
    expect = [(0, "NotIntegrableOnLevel"), (0, "NotIntegrableOnLevel"), (0, "OutOfScope")]
    verdict_line(11, got == expect, f"{got}")
