"""Widely linear matched filtering and improper-noise analysis.

The package solves the strictly linear matched filter (covariance only) and
the widely linear matched filter (covariance plus complementary covariance)
for complex improper noise, quantifies the SNR gain of the second over the
first, explains that gain through an approximate uncorrelating transform
with a closed-form lower bound, and interprets a small complex-valued CNN
as a bank of such filters. A command line harness (``wlmf-run``) reproduces
the accompanying numerical studies as CSV/JSON files.

Layout: ``linalg`` (complex Hermitian/symmetric factorizations), ``noise``
(improper MA noise models and covariances), ``filters`` (matched filter
solvers and SNRs), ``impropriety`` (gain analysis, bounds, sequence
designer), ``cnn`` (complex-valued classifier), ``experiments`` + ``cli``
(reproducible runs).
"""

from .errors import (
    DegenerateWindowError,
    DimensionMismatchError,
    DivergenceDetectedError,
    EmptyInputError,
    InsufficientSamplesError,
    InvalidImproprietyError,
    NotHermitianError,
    NotPositiveDefiniteError,
    NotSymmetricError,
    NumericalConsistencyError,
    SingularAtOneError,
    WlmfError,
)
from .linalg import (
    TakagiResult,
    hermitian_eig,
    hermitian_solve,
    is_positive_definite,
    takagi,
)
from .noise import (
    CovariancePair,
    NoiseModel,
    analytic_covariances,
    demo_model,
    empirical_covariances,
    ma_filter,
    sample_improper_white,
    sliding_windows,
)
from .filters import (
    AugmentedVectors,
    SlmfWeights,
    WlmfWeights,
    apply_filter_sequence,
    augment,
    slmf_solve,
    snr_gain,
    snr_slmf,
    snr_wlmf,
    template_to_feature,
    wlmf_solve,
)
from .impropriety import (
    AutDecomposition,
    ImproprietyProfile,
    approx_snr_gain,
    aut_decompose,
    design_matched_sequence,
    g_derivative,
    g_of_rho,
    impropriety_profile,
    lower_bound_rho,
    normalized_snr_bias,
    rotated_input,
)
from .cnn import (
    PATTERN_ONE,
    PATTERN_TWO,
    CnnConfig,
    CnnParams,
    LabeledSignal,
    TrainResult,
    backward,
    conv_forward,
    forward,
    head_forward,
    init_params,
    make_dataset,
    max_modulus_pool,
    predict_proba,
    split_relu,
    train,
)
from .experiments import (
    DEFAULT_RHO_GRID,
    DEMO_MATCHED_SEQUENCE,
    DEMO_TEMPLATE,
    EXPERIMENTS,
    ExperimentSpec,
    RunManifest,
    run_experiment,
)
from .seeding import derive_rng

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "WlmfError",
    "DimensionMismatchError",
    "EmptyInputError",
    "NotHermitianError",
    "NotSymmetricError",
    "NotPositiveDefiniteError",
    "InvalidImproprietyError",
    "InsufficientSamplesError",
    "SingularAtOneError",
    "DegenerateWindowError",
    "DivergenceDetectedError",
    "NumericalConsistencyError",
    "TakagiResult",
    "takagi",
    "hermitian_eig",
    "hermitian_solve",
    "is_positive_definite",
    "NoiseModel",
    "CovariancePair",
    "demo_model",
    "sample_improper_white",
    "ma_filter",
    "analytic_covariances",
    "empirical_covariances",
    "sliding_windows",
    "SlmfWeights",
    "WlmfWeights",
    "AugmentedVectors",
    "augment",
    "slmf_solve",
    "wlmf_solve",
    "snr_slmf",
    "snr_wlmf",
    "snr_gain",
    "apply_filter_sequence",
    "template_to_feature",
    "AutDecomposition",
    "ImproprietyProfile",
    "aut_decompose",
    "rotated_input",
    "impropriety_profile",
    "g_of_rho",
    "g_derivative",
    "lower_bound_rho",
    "approx_snr_gain",
    "normalized_snr_bias",
    "design_matched_sequence",
    "CnnConfig",
    "CnnParams",
    "LabeledSignal",
    "TrainResult",
    "make_dataset",
    "init_params",
    "PATTERN_ONE",
    "PATTERN_TWO",
    "conv_forward",
    "split_relu",
    "max_modulus_pool",
    "head_forward",
    "forward",
    "predict_proba",
    "backward",
    "train",
    "EXPERIMENTS",
    "DEFAULT_RHO_GRID",
    "DEMO_TEMPLATE",
    "DEMO_MATCHED_SEQUENCE",
    "ExperimentSpec",
    "RunManifest",
    "run_experiment",
    "derive_rng",
]
