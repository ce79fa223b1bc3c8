"""Per-block verdicts: degeneracy checks, branch dispatch and the final
decision on the identity component."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..exactmath import Poly, field_sqrt, poly_discriminant, poly_resultant, qsign, rational_sqrt
from ..variational.scalar import (
    ConstructionError,
    ReducedEquation,
    reduce_to_normal_form,
    scalar_ode_circular,
    scalar_ode_elliptic,
)
from ..variational.subsystem import SubsystemParams
from .candidates import KovacicCandidate, UnsupportedExtension, enumerate_candidates, polynomial_search
from .frobenius import InvariantError, LogReport, detect_log

GENERIC = "Generic"
E1 = "E1"
E3D4 = "E3d4"
TWO_E3D4 = "TwoE3d4"
CIRCULAR = "Circular"
AUTONOMOUS = "Autonomous"

NOT_SOLVABLE = "IdentityComponentNotSolvable"
FOUND = "HyperexponentialFound"
INCONCLUSIVE = "Inconclusive"

# admissible offsets s in sqrt(1 - 8 delta) = 4d + s on the e = 1 branch
E1_OFFSETS = (-7, -5, 1, 3, 5, 7, 13, 15)


@dataclass
class CandidateOutcome:
    candidate: KovacicCandidate
    polynomial: Poly | None

    @property
    def failed(self) -> bool:
        return self.polynomial is None


@dataclass
class Verdict:
    params: SubsystemParams | None
    branch: str
    log_evidence: list[LogReport]
    candidates: list[CandidateOutcome]
    conclusion: str
    witness: CandidateOutcome | None = None
    diagnostics: dict = field(default_factory=dict)
    reduced: ReducedEquation | None = field(default=None, repr=False)

    @property
    def any_log(self) -> bool:
        return any(lr.log_present for lr in self.log_evidence)


def check_soundness(v: Verdict) -> None:
    """A non-solvability claim needs a logarithm and no surviving candidate."""
    if v.conclusion == NOT_SOLVABLE:
        if not v.any_log:
            raise InvariantError("non-solvable verdict without a logarithmic singularity")
        if not all(c.failed for c in v.candidates):
            raise InvariantError("non-solvable verdict with a successful candidate")
    if v.conclusion == FOUND and (v.witness is None or v.witness.failed):
        raise InvariantError("hyperexponential verdict without a witness")


def branch_dispatch(params: SubsystemParams) -> str:
    if params.circular:
        return CIRCULAR
    e, d = params.e, params.delta
    if e == 0:
        return AUTONOMOUS
    if e == 1:
        return E1
    if e == 3 * d + 4:
        return E3D4
    if 2 * e == 3 * d + 4:
        return TWO_E3D4
    return GENERIC


def branch_delta_closed_form(params: SubsystemParams, branch: str):
    """Delta on the non-generic branches, or None when no closed form applies."""
    d = params.delta
    if branch == E1:
        return d * (9 * d + 17) + 6
    if branch == E3D4:
        return (3 * d + 4) * (7 * d + 9)
    if branch == TWO_E3D4:
        return (3 * d + 4) * (7 * d + 6) / 2
    return None


def branch_e1_integrality(delta) -> bool:
    """Whether the e = 1 branch admits an exponent choice with d in N_0.

    Writing the exponent at 0 as (2 +- sqrt(1 - 8 delta))/4, integrality of d
    forces sqrt(1 - 8 delta) = +-(4d + s) for some d >= 0 and s in the
    offset list.
    """
    delta = Fraction(delta)
    rad = 1 - 8 * delta
    if rad < 0:
        return False
    v = rational_sqrt(rad)
    if v is None or v.denominator != 1:
        return False
    v = int(v)
    for s in E1_OFFSETS:
        for target in (v, -v):
            if (target - s) % 4 == 0 and (target - s) // 4 >= 0:
                return True
    return False


def disc_closed_form_elliptic(params: SubsystemParams):
    d, e, D = params.delta, params.e, params.Delta
    return (
        4 * e**2 * (e - 1) ** 2 * (e + 1) ** 2
        * (d * (9 * d + 17) + D + 2 * e**2 + 4) ** 2
        * (9 * d**2 + 33 * d + D + 16 * d * e + 2 * e * (e + 12) + 28) ** 2
        * (9 * d**2 + 33 * d + D + 2 * e**2 - 8 * (2 * d + 3) * e + 28) ** 2
    )


def disc_closed_form_circular(params: SubsystemParams):
    d, D = params.delta, params.Delta
    return (3 * d + 4) ** 2 * (d * (9 * d - 3 * D + 17) - 4 * D + 4) ** 2 * (-3 * d + D - 7) ** 2


def decide(req: ReducedEquation, diagnostics: dict | None = None) -> tuple[str, list, list, CandidateOutcome | None]:
    """Logs, candidates and conclusion for a reduced Fuchsian equation."""
    diagnostics = {} if diagnostics is None else diagnostics
    logs = [detect_log(req, s.location) for s in req.singularities]
    try:
        cands = enumerate_candidates(req)
    except UnsupportedExtension as exc:
        diagnostics["unsupported_extension"] = str(exc)
        return INCONCLUSIVE, logs, [], None
    outcomes = [CandidateOutcome(c, polynomial_search(c, req)) for c in cands]
    witness = next((o for o in outcomes if not o.failed), None)
    if witness is not None:
        return FOUND, logs, outcomes, witness
    if any(lr.log_present for lr in logs):
        return NOT_SOLVABLE, logs, outcomes, None
    diagnostics["reason"] = "no logarithmic singularity; Kovacic cases 2 and 3 are not implemented"
    return INCONCLUSIVE, logs, outcomes, None


def verdict_for_equation(req: ReducedEquation, branch: str = GENERIC) -> Verdict:
    """Verdict for a directly supplied equation (controls and tests)."""
    diag: dict = {}
    conclusion, logs, outcomes, witness = decide(req, diag)
    v = Verdict(None, branch, logs, outcomes, conclusion, witness, diag, req)
    check_soundness(v)
    return v


def _inconclusive(params, branch, reason, **extra) -> Verdict:
    diag = {"reason": reason}
    diag.update(extra)
    return Verdict(params, branch, [], [], INCONCLUSIVE, None, diag)


def galois_verdict(params: SubsystemParams) -> Verdict:
    """Decide solvability of the identity component for one B_+ block."""
    if params.delta <= 0:
        return _inconclusive(params, GENERIC if not params.circular else CIRCULAR, "delta must be positive")
    branch = branch_dispatch(params)
    if branch == AUTONOMOUS:
        return _inconclusive(params, branch, "e = 0: autonomous equation, no obstruction available")
    if not params.circular and params.e < 0:
        return _inconclusive(params, branch, "negative eccentricity")
    diag: dict = {}

    closed = branch_delta_closed_form(params, branch)
    if closed is not None:
        if params.Delta != closed:
            raise InvariantError(f"Delta = {params.Delta} differs from the {branch} closed form {closed}")
        diag["Delta_closed_form"] = closed

    ode = scalar_ode_circular(params) if params.circular else scalar_ode_elliptic(params)
    req = reduce_to_normal_form(ode)

    disc = poly_discriminant(req.Q_poly)
    expected = disc_closed_form_circular(params) if params.circular else disc_closed_form_elliptic(params)
    if disc != expected:
        raise ConstructionError(f"discriminant {disc} differs from its closed form {expected}")
    res = poly_resultant(req.P_raw, req.Q_poly)
    confluent = disc == 0 or res == 0
    diag["disc_Q_zero"] = disc == 0
    diag["resultant_zero"] = res == 0
    expect_confluent = branch in (E1, E3D4, TWO_E3D4)
    if confluent != expect_confluent:
        return Verdict(params, branch, [], [], INCONCLUSIVE, None, dict(
            diag, reason="degeneracy of the singular points does not match the branch tests"), req)

    if params.circular:
        # the exponent at the root z = 1 is real only if this is non-negative
        diag["circular_sign"] = qsign(1 - params.delta - params.Delta)

    conclusion, logs, outcomes, witness = decide(req, diag)
    if branch == E1 and branch_e1_integrality(params.delta) != bool(outcomes):
        raise InvariantError("e = 1 integrality test disagrees with the candidate enumeration")
    v = Verdict(params, branch, logs, outcomes, conclusion, witness, diag, req)
    check_soundness(v)
    return v


def field_is_rational(params: SubsystemParams) -> bool:
    return field_sqrt(params.DeltaSq) is not None and rational_sqrt(params.DeltaSq) is not None
