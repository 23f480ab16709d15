"""Exact dynamics of weakly coupled bipartite quantum systems, with
numerically certified equilibration and einselection bounds."""

__version__ = "0.1.0"

from .bipartite import (
    BipartiteSystem,
    GapReport,
    assemble,
    decompose,
    kron,
    partial_trace_B,
    partial_trace_S,
    validate_gaps,
)
from .bounds import (
    EXP_TAIL_CONSTANT,
    BoundReport,
    PairingResult,
    Theorem2Report,
    greedy_pairing,
    lemma1_lower_bound,
    max_pairing,
    projector_witness,
    theorem1_check,
    theorem2_check,
    theorem3_check,
    theorem4_along_records,
    theorem4_check,
)
from .dynamics import (
    TimeAverageEstimate,
    TrajectoryRecord,
    default_horizon,
    dephase,
    effective_dimension,
    evolve,
    offdiag_pairs,
    sample_trajectory,
    subsystem_derivative,
    subsystem_speed,
    time_average,
)
from .ensembles import (
    RandomSpec,
    gue,
    haar_product_state,
    haar_state,
    haar_vector,
    random_bipartite,
    random_density,
    trial_seed,
)
from .errors import (
    AsymmetricWeights,
    ConfigInvalid,
    DegenerateGapsWarning,
    DegenerateSpectrumWarning,
    DimensionMismatch,
    EinselError,
    IndexOutOfRange,
    InsufficientSamples,
    InvalidPairing,
    InvalidState,
    ManifestMissing,
    NonHermitianInput,
    SubspaceTooLarge,
    VersionMismatchWarning,
)
from .experiments import ExperimentConfig, ReplayResult, RunResult, default_config, replay, run
from .linalg import (
    DensityMatrix,
    HermitianOperator,
    SpectralDecomposition,
    commutator,
    eigh,
    matrix_exp_unitary,
    op_norm,
    trace_distance,
    trace_norm,
)
from .pointer import (
    ContrastReport,
    PointerModel,
    contrast_experiment,
    maximally_coherent_state,
    pointer_evolve,
    pointer_hamiltonian,
    pointer_spectral_decomposition,
    random_pointer_model,
    run_pointer_trajectory,
    suppression_factor,
)

__all__ = [name for name in dir() if not name.startswith("_")]
