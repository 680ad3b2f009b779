"""Exact, enumerated and sampled tests of a three-setting Bell inequality.

The inequality under test: for matched pairs with two-valued properties
A, B, C,

    p_same(A,B) + p_same(A,C) + p_same(B,C) >= 1

holds for every local hidden-variable description, while the maximally
entangled qubit pair measured along three 120-degree-separated bases reaches
3/4.
"""

from .analysis import (
    ScanResult,
    VennAreas,
    VennChain,
    bell_sum_check,
    scan_angles,
    venn_bound_check,
    venn_chain,
    venn_decomposition,
)
from .errors import (
    InvalidArgumentError,
    InvalidDistributionError,
    InvalidStateError,
    ModelFormatError,
    TrinebellError,
)
from .lhv import (
    HypothesisFlags,
    LambdaEntry,
    LhvModel,
    PropertyTriplet,
    ResponseTable,
    check_bell_locality,
    check_perfect_correlation,
    classify_model,
    derive_determinism,
    enumerate_deterministic_strategies,
    joint_probability,
    lhv_bell_record,
    lhv_p_same,
    model_from_triplet_distribution,
    uniform_triplet_model,
)
from .modelfile import load_model, parse_model, save_model, serialize_model
from .montecarlo import (
    EstimateReport,
    LhvSource,
    QuantumSource,
    RunConfig,
    TrialRecord,
    run_experiment,
    sample_trial,
)
from .quantum import (
    CorrelationRecord,
    JointOutcomeDistribution,
    MeasurementBasis,
    TwoQubitState,
    basis_from_angle,
    bell_record,
    joint_distribution,
    make_phi_plus,
    p_same,
    trine_bases,
    verify_schmidt_invariance,
)

__version__ = "0.1.0"
