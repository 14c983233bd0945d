"""Witness-based certification of entanglement structures.

Builds separability and depth witnesses for n-qubit generalized GHZ
states, evaluates them on density matrices or measured counts, computes
the matching separable-state bounds (closed-form, see-saw, brute-force
oracles), and infers the finest certifiable partition from data.
"""

from .errors import (
    CountsFormatError,
    EntstructError,
    NumericError,
    UsageError,
    ValidationError,
)
from .core import (
    DenseOperator,
    QubitObservable,
    THETA_MID,
    THETA_MINUS,
    THETA_PLUS,
    a_mix_observable,
    a_minus_observable,
    a_plus_observable,
    expectation,
    hermitian_eig_max,
    kron,
    pauli_xy_observable,
)
from .states import (
    Partition,
    StateDensity,
    geometry_to_structure,
    ghz,
    ghz_noise_model,
    product_structure,
    visibility_state,
    white_noise_mix,
)
from .witnesses import (
    DEFAULT_GAMMA_GRID,
    KAPPA,
    BoundEntry,
    DepthWitness,
    ExpectationPair,
    SeparabilityWitness,
    WitnessValue,
    build_depth_witness,
    build_separability_witness,
    depth_lower_bound,
    depth_witness_value,
    di_bound,
    intactness_upper_bound,
    kprod_bound,
    kprod_bound_entry,
    msep_bound,
    mx_operator,
    mz_operator,
    optimal_alpha,
    separability_witness_value,
)
from .bounds import (
    BoundResult,
    CurveCell,
    SeesawConfig,
    brute_oracle_max,
    kprod_curve,
    mb_lambda_max,
    msep_bound_numeric,
    product_state_value,
    seesaw_max,
    sos_gap,
)
from .noise import (
    GammaEstimate,
    MarginPoint,
    estimate_gammas,
    generalized_ghz_thresholds,
    gme_noise_threshold,
    intactness_noise_threshold,
    visibility_margin_curve,
)
from .tomo import (
    Estimate,
    MeasurementRecord,
    MeasurementSetting,
    estimate_mz,
    estimate_product_expectation,
    load_counts,
    marginalize,
    probabilities,
    sample_counts,
    save_counts,
    write_estimates_csv,
)
from .inference import (
    ExpectationTable,
    InferenceConfig,
    StructureReport,
    TableEntry,
    consistency_check,
    infer_structure,
    load_expectation_table,
    report_to_dict,
    subset_witness_scan,
)

__version__ = "0.1.0"

__all__ = [
    "BoundEntry",
    "BoundResult",
    "CountsFormatError",
    "CurveCell",
    "DEFAULT_GAMMA_GRID",
    "DenseOperator",
    "DepthWitness",
    "EntstructError",
    "Estimate",
    "ExpectationPair",
    "ExpectationTable",
    "GammaEstimate",
    "InferenceConfig",
    "KAPPA",
    "MarginPoint",
    "MeasurementRecord",
    "MeasurementSetting",
    "NumericError",
    "Partition",
    "QubitObservable",
    "SeesawConfig",
    "SeparabilityWitness",
    "StateDensity",
    "StructureReport",
    "TableEntry",
    "THETA_MID",
    "THETA_MINUS",
    "THETA_PLUS",
    "UsageError",
    "ValidationError",
    "WitnessValue",
    "a_minus_observable",
    "a_mix_observable",
    "a_plus_observable",
    "brute_oracle_max",
    "build_depth_witness",
    "build_separability_witness",
    "consistency_check",
    "depth_lower_bound",
    "depth_witness_value",
    "di_bound",
    "estimate_gammas",
    "estimate_mz",
    "estimate_product_expectation",
    "expectation",
    "generalized_ghz_thresholds",
    "geometry_to_structure",
    "ghz",
    "ghz_noise_model",
    "gme_noise_threshold",
    "hermitian_eig_max",
    "infer_structure",
    "intactness_noise_threshold",
    "intactness_upper_bound",
    "kprod_bound",
    "kprod_bound_entry",
    "kprod_curve",
    "kron",
    "load_counts",
    "load_expectation_table",
    "marginalize",
    "mb_lambda_max",
    "msep_bound",
    "msep_bound_numeric",
    "mx_operator",
    "mz_operator",
    "optimal_alpha",
    "pauli_xy_observable",
    "probabilities",
    "product_state_value",
    "product_structure",
    "report_to_dict",
    "sample_counts",
    "save_counts",
    "seesaw_max",
    "separability_witness_value",
    "sos_gap",
    "subset_witness_scan",
    "visibility_margin_curve",
    "visibility_state",
    "white_noise_mix",
    "write_estimates_csv",
]
