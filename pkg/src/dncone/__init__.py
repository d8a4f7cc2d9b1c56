"""dncone: a numerical laboratory for the doubly nonnegative matrix cone.

Spectral and entrywise matrix functions, divided-difference preservation
criteria, and seeded empirical probes of the critical-exponent phase
transition for matrix powers.
"""

from .cone import (
    DnSamplerConfig,
    DnVerdict,
    STRATEGIES,
    check_dn,
    project_dn,
    sample_dn,
)
from .divdiff import DividedDiffTable, divided_differences
from .errors import (
    BracketStall,
    ConditionViolation,
    DerivativeUnavailable,
    DnConeError,
    DomainError,
    IllConditioned,
    InconsistentBracket,
    NonConvergence,
    OrderUnsupported,
    ParseError,
    ProjectionStall,
    QuadratureStall,
    SamplerStall,
    SingularShift,
    SymmetryError,
)
from .funcs import (
    ExpFamily,
    PowerShift,
    PurePower,
    ScalarFunc,
    Tabulated,
    func_from_config,
    lemma_derivative,
)
from .matfuncs import (
    QuadratureSpec,
    explicit_offdiag_entry,
    hadamard_apply,
    newton_matrix_polynomial,
    power_apply,
    quadrature_power,
    quadrature_power_scalar,
    resolvent_product,
    spectral_apply,
)
from .probe import (
    AlphaFamily,
    ExponentEstimate,
    ProbeReport,
    Witness,
    bracket_exponent,
    default_budget,
    find_violation,
)
from .rng import SplitMix64
from .scans import (
    ExceptionalScanReport,
    GridSpec,
    SignScanResult,
    Violation,
    classify_against_exceptional_set,
    critical_threshold,
    derivative_sign_scan,
    exceptional_set,
    exceptional_set_scan,
    family_exponent_scan,
    mw_preserves,
)
from .spectral import SpectralDecomp, eig_sym, shifted_apply_inverse, symmetrize
from .verify import CheckResult, SuiteReport, VerifyTolerances, verify_theorem_suite

__version__ = "0.1.0"

__all__ = [
    "AlphaFamily",
    "BracketStall",
    "CheckResult",
    "ConditionViolation",
    "DerivativeUnavailable",
    "DividedDiffTable",
    "DnConeError",
    "DnSamplerConfig",
    "DnVerdict",
    "DomainError",
    "ExceptionalScanReport",
    "ExpFamily",
    "ExponentEstimate",
    "GridSpec",
    "IllConditioned",
    "InconsistentBracket",
    "NonConvergence",
    "OrderUnsupported",
    "ParseError",
    "PowerShift",
    "ProbeReport",
    "ProjectionStall",
    "PurePower",
    "QuadratureSpec",
    "QuadratureStall",
    "STRATEGIES",
    "SamplerStall",
    "ScalarFunc",
    "SignScanResult",
    "SingularShift",
    "SpectralDecomp",
    "SplitMix64",
    "SuiteReport",
    "SymmetryError",
    "Tabulated",
    "VerifyTolerances",
    "Violation",
    "Witness",
    "bracket_exponent",
    "check_dn",
    "classify_against_exceptional_set",
    "critical_threshold",
    "default_budget",
    "derivative_sign_scan",
    "divided_differences",
    "eig_sym",
    "exceptional_set",
    "exceptional_set_scan",
    "explicit_offdiag_entry",
    "family_exponent_scan",
    "find_violation",
    "func_from_config",
    "hadamard_apply",
    "lemma_derivative",
    "mw_preserves",
    "newton_matrix_polynomial",
    "power_apply",
    "project_dn",
    "quadrature_power",
    "quadrature_power_scalar",
    "resolvent_product",
    "sample_dn",
    "shifted_apply_inverse",
    "spectral_apply",
    "symmetrize",
    "verify_theorem_suite",
]
