"""Band-gap spectra of periodic Jacobi operators.

Builds the discriminant of a period-p Jacobi operator, extracts the p
spectral bands as the preimage of [-2, 2], cross-validates the band edges
against Floquet eigenvalues, computes capacity, Chebyshev number, Widom
factor and equilibrium band weights, and evaluates a suite of band/gap
estimates against the exact band data.
"""

from .bands import BandStructure, Interval, band_structure, bands_to_csv, gap_report
from .bounds import (
    BoundRecord,
    BoundsReport,
    classical_bounds,
    corollary_max_band,
    corollary_min_band,
    evaluate_all_bounds,
    theorem_log_sum_lower,
    theorem_log_sum_upper,
)
from .coefficients import (
    PeriodicCoefficients,
    ScalarSummary,
    load_operator,
    new_periodic,
    parse_operator,
    scalar_summary,
)
from .discriminant import (
    DiscriminantData,
    TransferMatrix,
    build_discriminant,
    eval_discriminant_exact,
    eval_discriminant_stable,
    transfer_matrix,
)
from .ensemble import (
    EnsembleConfig,
    EnsembleResult,
    TrialReport,
    run_ensemble,
    run_trial,
    sample_operator,
)
from .errors import (
    AlternationFailure,
    CapacityMismatch,
    ConfigInvalid,
    DegenerateInterval,
    EdgeCountMismatch,
    IndexOutOfRange,
    JacobiBandsError,
    LengthMismatch,
    NonConvergence,
    NonFiniteEntry,
    NonPositiveOffDiagonal,
    PropertyViolation,
)
from .floquet import SymMatrix, band_edges_oracle, floquet_matrix, symmetric_eigenvalues
from .polynomial import Poly, Root, poly_arith, poly_derivative, poly_eval, real_roots_in
from .potential import (
    AlternationData,
    AlternationPoint,
    PotentialReport,
    alternation_set,
    capacity_interval,
    chebyshev_number,
    equilibrium_band_measures,
    potential_report,
    spectrum_capacity,
)

__version__ = "0.1.0"

__all__ = [
    "AlternationData",
    "AlternationFailure",
    "AlternationPoint",
    "BandStructure",
    "BoundRecord",
    "BoundsReport",
    "CapacityMismatch",
    "ConfigInvalid",
    "DegenerateInterval",
    "DiscriminantData",
    "EdgeCountMismatch",
    "EnsembleConfig",
    "EnsembleResult",
    "IndexOutOfRange",
    "Interval",
    "JacobiBandsError",
    "LengthMismatch",
    "NonConvergence",
    "NonFiniteEntry",
    "NonPositiveOffDiagonal",
    "PeriodicCoefficients",
    "Poly",
    "PotentialReport",
    "PropertyViolation",
    "Root",
    "ScalarSummary",
    "SymMatrix",
    "TransferMatrix",
    "TrialReport",
    "alternation_set",
    "band_edges_oracle",
    "band_structure",
    "bands_to_csv",
    "build_discriminant",
    "capacity_interval",
    "chebyshev_number",
    "classical_bounds",
    "corollary_max_band",
    "corollary_min_band",
    "equilibrium_band_measures",
    "eval_discriminant_exact",
    "eval_discriminant_stable",
    "evaluate_all_bounds",
    "floquet_matrix",
    "gap_report",
    "load_operator",
    "new_periodic",
    "parse_operator",
    "poly_arith",
    "poly_derivative",
    "poly_eval",
    "potential_report",
    "real_roots_in",
    "run_ensemble",
    "run_trial",
    "sample_operator",
    "scalar_summary",
    "spectrum_capacity",
    "symmetric_eigenvalues",
    "theorem_log_sum_lower",
    "theorem_log_sum_upper",
    "transfer_matrix",
]
