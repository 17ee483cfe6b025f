"""Quantum-input Bell witnesses.

Build a Bell-like inequality from any entangled state with a non-positive
partial transpose (or any state detected by a user-supplied positive map),
compute the quantum correlations that violate it, and verify that separable
measurement strategies cannot.
"""

from .linalg import (
    DEFAULT_TOL,
    DimensionMismatchError,
    HermitianEigenResult,
    NotHermitianError,
    SingularMatrixError,
    eig_hermitian,
    is_psd,
    kron,
    partial_trace,
    partial_transpose,
    solve_linear,
)
from .states import (
    DensityMatrix,
    EnsembleDiagnostics,
    FiducialSearchError,
    InputEnsemble,
    PureState,
    basis_ensemble,
    ensemble_diagnostics,
    flip_operator,
    max_entangled,
    sic_ensemble,
    singlet,
    tetrahedron_ensemble,
    werner_state,
    weyl_heisenberg_orbit,
)
from .scenario import (
    CorrelationTable,
    QIScenario,
    canonical_scenario,
    closed_form_correlations,
    closed_form_table,
    correlations,
    correlations_joint,
    effective_povm,
)
from .witness import (
    NoNegativeEigenvalueError,
    NotInformationallyCompleteError,
    PositiveMapSpec,
    WitnessCoefficients,
    apply_map,
    build_coefficients,
    build_witness,
    choi_map,
    evaluate_inequality,
    negative_eigenstate,
    predicted_quantum_value,
    transposition_map,
    werner_beta_closed_form,
)
from .adversary import (
    AttackReport,
    GuessStrategy,
    MinimizeResult,
    SeparableStrategy,
    guess_strategy_correlation,
    minimize_inequality,
    pgm_povm,
    run_attack,
    sample_strategy,
    separable_correlation,
    witness_id,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_TOL",
    "AttackReport",
    "CorrelationTable",
    "DensityMatrix",
    "DimensionMismatchError",
    "EnsembleDiagnostics",
    "FiducialSearchError",
    "GuessStrategy",
    "HermitianEigenResult",
    "InputEnsemble",
    "MinimizeResult",
    "NoNegativeEigenvalueError",
    "NotHermitianError",
    "NotInformationallyCompleteError",
    "PositiveMapSpec",
    "PureState",
    "QIScenario",
    "SeparableStrategy",
    "SingularMatrixError",
    "WitnessCoefficients",
    "apply_map",
    "basis_ensemble",
    "build_coefficients",
    "build_witness",
    "canonical_scenario",
    "choi_map",
    "closed_form_correlations",
    "closed_form_table",
    "correlations",
    "correlations_joint",
    "effective_povm",
    "eig_hermitian",
    "ensemble_diagnostics",
    "evaluate_inequality",
    "flip_operator",
    "guess_strategy_correlation",
    "is_psd",
    "kron",
    "max_entangled",
    "minimize_inequality",
    "negative_eigenstate",
    "partial_trace",
    "partial_transpose",
    "pgm_povm",
    "predicted_quantum_value",
    "run_attack",
    "sample_strategy",
    "separable_correlation",
    "sic_ensemble",
    "singlet",
    "solve_linear",
    "tetrahedron_ensemble",
    "transposition_map",
    "werner_beta_closed_form",
    "werner_state",
    "weyl_heisenberg_orbit",
    "witness_id",
]
