"""Train strongly convex models while caching the optimization path, then
rapidly update the trained parameters after deletion or addition of samples
using a quasi-Newton correction of the cached trajectory."""

from .dataio import (
    SyntheticSpec,
    generate_synthetic,
    load_cache,
    load_model,
    parse_csv,
    parse_libsvm,
    save_cache,
    save_model,
)
from .engine import (
    ChangeSet,
    DeltaGradConfig,
    UpdateOutcome,
    baseline_retrain,
    expected_full_gradient_evals,
    record_benchmark,
    relearn_batch_gd,
    unlearn_batch_gd,
    unlearn_batch_sgd,
    unlearn_general,
    unlearn_online,
)
from .errors import (
    CacheFormatError,
    ChangeSetError,
    DeltaGradError,
    DimensionMismatchError,
    DivergenceError,
    FactorizationError,
    FingerprintMismatchError,
    ParseError,
    PrivacyBoundError,
)
from .lbfgs import CurvaturePairBuffer, inverse_apply, quasi_hvp, recursive_B_apply
from .models import (
    Dataset,
    LossConfig,
    Objective,
    full_gradient,
    hessian_vector_product,
    loss,
    smoothness_bound,
    subset_gradient_sum,
)
from .privacy import (
    ConstantEstimates,
    PrivacyParams,
    delta_bound,
    estimate_constants,
    laplace_noise,
    log_density_ratio_bound,
    sample_laplace,
)
from .trainer import TrainConfig, TrainingHistory, derive_schedule, train_gd, train_sgd

__version__ = "0.1.0"

__all__ = [
    "CacheFormatError",
    "ChangeSet",
    "ChangeSetError",
    "ConstantEstimates",
    "CurvaturePairBuffer",
    "Dataset",
    "DeltaGradConfig",
    "DeltaGradError",
    "DimensionMismatchError",
    "DivergenceError",
    "FactorizationError",
    "FingerprintMismatchError",
    "LossConfig",
    "Objective",
    "ParseError",
    "PrivacyBoundError",
    "PrivacyParams",
    "SyntheticSpec",
    "TrainConfig",
    "TrainingHistory",
    "UpdateOutcome",
    "baseline_retrain",
    "delta_bound",
    "derive_schedule",
    "estimate_constants",
    "expected_full_gradient_evals",
    "full_gradient",
    "generate_synthetic",
    "hessian_vector_product",
    "inverse_apply",
    "laplace_noise",
    "load_cache",
    "load_model",
    "log_density_ratio_bound",
    "loss",
    "parse_csv",
    "parse_libsvm",
    "quasi_hvp",
    "record_benchmark",
    "recursive_B_apply",
    "relearn_batch_gd",
    "sample_laplace",
    "save_cache",
    "save_model",
    "smoothness_bound",
    "subset_gradient_sum",
    "train_gd",
    "train_sgd",
    "unlearn_batch_gd",
    "unlearn_batch_sgd",
    "unlearn_general",
    "unlearn_online",
]
