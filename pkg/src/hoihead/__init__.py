"""Cosine classifier heads for multi-label HOI recognition on precomputed features."""

from .classifier import (
    DEFAULT_GAMMA,
    ClassifierWeights,
    forward,
    init_from_embeddings,
    init_random,
    weight_grad,
)
from .dataio import DTYPE_F32, DTYPE_I8, read_matrix, write_matrix
from .errors import (
    ConfigError,
    DataFormatError,
    DegenerateInputError,
    HoiheadError,
    NumericFailure,
)
from .harness import RunRecord, TrainConfig, ablate, evaluate, sweep_gamma, train
from .labelspace import (
    ClassList,
    HoiLabel,
    Prompt,
    gerundize,
    make_prompt,
    make_prompts,
    parse_class_list,
)
from .losses import (
    ClassStats,
    bce_grad,
    bce_loss,
    focal_grad,
    focal_loss,
    gradcheck,
    lse_sign_grad,
    lse_sign_loss,
    weighted_bce_grad,
    weighted_bce_loss,
)
from .metrics import ApReport, DriftReport, average_precision, map_eval, structure_drift
from .optim import AdamState, Schedule, adam_step, lr_at
from .sampler import EpochPlan, SplitPlan, batches, plan_epoch, split
from .synth import make_benchmark, make_separable

__version__ = "0.1.0"
