"""Viterbi training for HMMs with non-emitting entry/exit states and
diagonal-Gaussian emissions: uniform-segmentation bootstrap, log-domain
alignment, segmental re-estimation, convergence-tested iteration."""

from .errors import (
    CorruptTrellisError,
    DataFormatError,
    DeadTrellisError,
    DimensionMismatchError,
    EmptyStateWarning,
    HmmError,
    InvalidVarianceError,
    ModelValidationError,
    PathSpaceTooLargeError,
    TooFewFramesError,
)
from .estimator import ViterbiGaussianHMM
from .formats import (
    read_model,
    read_observations,
    write_alignment,
    write_model,
    write_observations,
    write_report,
)
from .model import (
    LOG_SMALL,
    LOG_ZERO,
    GaussianState,
    HmmModel,
    check_observations,
    gconst,
    is_impossible,
    validate,
)
from .training import (
    TrainingConfig,
    TrainingReport,
    estimate_gaussians,
    estimate_transitions,
    initialize,
    train,
    uniform_segment,
)
from .viterbi import (
    AlignmentResult,
    Trellis,
    align,
    backtrack,
    init_trellis,
    recurse_step,
    terminate,
)

__version__ = "0.1.0"

__all__ = [
    "AlignmentResult",
    "CorruptTrellisError",
    "DataFormatError",
    "DeadTrellisError",
    "DimensionMismatchError",
    "EmptyStateWarning",
    "GaussianState",
    "HmmError",
    "HmmModel",
    "InvalidVarianceError",
    "LOG_SMALL",
    "LOG_ZERO",
    "ModelValidationError",
    "PathSpaceTooLargeError",
    "TooFewFramesError",
    "TrainingConfig",
    "TrainingReport",
    "Trellis",
    "ViterbiGaussianHMM",
    "align",
    "backtrack",
    "check_observations",
    "estimate_gaussians",
    "estimate_transitions",
    "gconst",
    "init_trellis",
    "initialize",
    "is_impossible",
    "read_model",
    "read_observations",
    "recurse_step",
    "terminate",
    "train",
    "uniform_segment",
    "validate",
    "write_alignment",
    "write_model",
    "write_observations",
    "write_report",
]
