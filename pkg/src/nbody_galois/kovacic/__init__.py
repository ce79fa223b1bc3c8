"""Logarithmic singularities, Kovacic case 1 and per-block verdicts."""

from .candidates import (
    KovacicCandidate,
    UnsupportedExtension,
    enumerate_candidates,
    kovacic_operator,
    polynomial_search,
)
from .frobenius import (
    FrobeniusSeries,
    InvariantError,
    LogReport,
    ResonanceError,
    detect_log,
    frobenius_series,
    local_coefficients,
)
from .verdict import (
    AUTONOMOUS,
    CIRCULAR,
    E1,
    E3D4,
    FOUND,
    GENERIC,
    INCONCLUSIVE,
    NOT_SOLVABLE,
    TWO_E3D4,
    CandidateOutcome,
    Verdict,
    branch_dispatch,
    branch_e1_integrality,
    check_soundness,
    galois_verdict,
    verdict_for_equation,
)
from .analysis import (
    NOT_INTEGRABLE,
    OUT_OF_SCOPE,
    AnalysisOptions,
    DeltaAnalysis,
    EndpointRun,
    ObstructionReport,
    analyze_system,
)
