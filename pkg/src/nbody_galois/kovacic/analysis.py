"""Whole-system analysis: configuration, spectrum, orbit case and one
verdict per delta, with endpoint re-runs certifying the float deltas."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from ..central_config import (
    CollinearConfig,
    ConfigurationError,
    MassSystem,
    RationalDelta,
    Spectrum,
    build_cmatrix,
    solve_moulton,
    spectrum,
)
from ..homographic import CIRCULAR, ECCENTRIC_COMPLEX, MOMENTUM_ZERO, OrbitParams, orbit_from_levels
from ..variational.subsystem import SubsystemParams
from .verdict import INCONCLUSIVE, NOT_SOLVABLE, Verdict, galois_verdict

NOT_INTEGRABLE = "NotIntegrableOnLevel"
OUT_OF_SCOPE = "OutOfScope"

ZERO_MOMENTUM_NOTE = (
    "c = 0: only homothetic solutions are available on this level; this case is "
    "covered by Combot's earlier non-integrability result for the planar n-body "
    "problem and is not analysed here"
)


@dataclass(frozen=True)
class AnalysisOptions:
    precision: int = 128
    certify: bool = True
    moulton_tol: float = 1e-13
    timings: bool = False


@dataclass
class EndpointRun:
    delta: Fraction
    e: Fraction | None
    branch: str
    conclusion: str


@dataclass
class DeltaAnalysis:
    index: int
    delta: RationalDelta
    verdict: Verdict
    endpoints: list[EndpointRun] = field(default_factory=list)
    certified: bool = False


@dataclass
class ObstructionReport:
    masses: tuple[float, ...]
    ordering: tuple[int, ...]
    h: Fraction
    c: Fraction
    orbit: OrbitParams
    config: CollinearConfig | None
    spectrum: Spectrum | None
    per_delta: list[DeltaAnalysis]
    overall: str
    notes: list[str] = field(default_factory=list)
    timings: dict = field(default_factory=dict)
    options: AnalysisOptions = field(default_factory=AnalysisOptions)

    @property
    def case_tag(self) -> str:
        return self.orbit.case_tag

    @property
    def any_inconclusive(self) -> bool:
        return self.overall == INCONCLUSIVE or any(
            d.verdict.conclusion == INCONCLUSIVE for d in self.per_delta
        )


def _params(delta, orbit: OrbitParams, e=None) -> SubsystemParams:
    if orbit.case_tag == CIRCULAR:
        return SubsystemParams(delta, circular=True)
    return SubsystemParams(delta, orbit.e if e is None else e)


def _analyze_delta(k: int, rd: RationalDelta, orbit: OrbitParams, certify: bool) -> DeltaAnalysis:
    verdict = galois_verdict(_params(rd.value, orbit))
    out = DeltaAnalysis(k, rd, verdict)
    if not certify:
        return out
    deltas = [rd.lo, rd.hi]
    es = [None] if orbit.e_exact else [orbit.e_lo, orbit.e_hi]
    for d in deltas:
        for e in es:
            if d <= 0:
                out.endpoints.append(EndpointRun(d, e, "-", INCONCLUSIVE))
                continue
            v = galois_verdict(_params(d, orbit, e))
            out.endpoints.append(EndpointRun(d, e, v.branch, v.conclusion))
    out.certified = all(
        r.branch == verdict.branch and r.conclusion == verdict.conclusion for r in out.endpoints
    )
    return out


def analyze_system(
    masses: Sequence[float],
    h,
    c,
    ordering: Sequence[int] | None = None,
    options: AnalysisOptions | None = None,
) -> ObstructionReport:
    """Run the full obstruction pipeline on the (h, c) level."""
    options = options or AnalysisOptions()
    ms = masses if isinstance(masses, MassSystem) else MassSystem(masses)
    if ms.n < 3:
        raise ConfigurationError("analysis needs n > 2 bodies")
    timings: dict = {}
    t0 = time.perf_counter()
    orbit = orbit_from_levels(h, c)
    config = solve_moulton(ms, ordering, tol=options.moulton_tol)
    spec = spectrum(build_cmatrix(config), ms)
    timings["configuration"] = time.perf_counter() - t0

    report = ObstructionReport(
        ms.masses, config.ordering, orbit.h, orbit.c, orbit, config, spec, [], INCONCLUSIVE,
        options=options,
    )
    if orbit.case_tag == MOMENTUM_ZERO:
        report.overall = OUT_OF_SCOPE
        report.notes.append(ZERO_MOMENTUM_NOTE)
        return report
    if orbit.case_tag == ECCENTRIC_COMPLEX:
        report.notes.append("1 + 2 h c^2 < 0: no real Kepler orbit on this level")
        return report
    if not orbit.e_exact:
        report.notes.append(
            f"e = sqrt({orbit.e2}) is irrational; verdicts use e = {orbit.e} "
            f"and are re-run at e in [{orbit.e_lo}, {orbit.e_hi}]"
        )

    t1 = time.perf_counter()
    for k, rd in enumerate(spec.delta_rationalized):
        if rd.value <= 0:
            raise ConfigurationError(f"delta_{k} = {rd.float_value} is not positive")
        report.per_delta.append(_analyze_delta(k, rd, orbit, options.certify))
    timings["verdicts"] = time.perf_counter() - t1
    if options.timings:
        report.timings = timings

    if any(d.verdict.conclusion == NOT_SOLVABLE and d.certified for d in report.per_delta):
        report.overall = NOT_INTEGRABLE
    elif any(d.verdict.conclusion == NOT_SOLVABLE for d in report.per_delta):
        report.notes.append("a non-solvable block was found but its delta enclosure did not certify")
    return report
