"""Two-phase deep discriminant classifier with a hand-rolled training engine.

The package trains a wide sigmoid network on tabular features, then a
small relu head on that network's scalar outputs, entirely on top of a
deterministic counter-based random stream. It ships the data pipeline
(CSV cleaning, imputation, standardization, stratified splitting), the
evaluation metrics and curve files, a classical Fisher discriminant
baseline, and a command-line tool tying them into reproducible runs.
"""

from .data import (
    DataSchema,
    Dataset,
    RawTable,
    Standardizer,
    apply_standardizer,
    clean,
    fit_standardizer,
    load_csv,
    load_schema,
    stratified_split,
)
from .exceptions import (
    ContractError,
    DataError,
    DeepLdaError,
    NumericalError,
    ShapeError,
)
from .fisher import LdaModel, fisher_ratio, fit_fisher, load_lda, predict_lda, save_lda
from .metrics import (
    ConfusionMatrix,
    EpochRecord,
    TrainingHistory,
    accuracy,
    confusion,
    f_score,
    format_report,
    history_to_csv,
    precision,
    read_history_csv,
    recall,
    report_dict,
)
from .network import (
    AdamState,
    Gradients,
    LayerSpec,
    Network,
    NetworkSpec,
    TrainConfig,
    adam_step,
    backward,
    bce_loss,
    dense,
    dropout,
    fit,
    forward,
    init_network,
    l2_penalty,
    layer_param_counts,
    load_network,
    param_count,
    predict,
    save_network,
)
from .pipeline import (
    TwoPhaseModel,
    build_phase1_spec,
    build_phase2_spec,
    load_two_phase,
    predict_two_phase,
    save_two_phase,
    train_two_phase,
    transform_phase1,
)
from .rng import SplitMix64

__version__ = "0.1.0"

__all__ = [
    "AdamState",
    "ConfusionMatrix",
    "ContractError",
    "DataError",
    "DataSchema",
    "Dataset",
    "DeepLdaError",
    "EpochRecord",
    "Gradients",
    "LayerSpec",
    "LdaModel",
    "Network",
    "NetworkSpec",
    "NumericalError",
    "RawTable",
    "ShapeError",
    "SplitMix64",
    "Standardizer",
    "TrainConfig",
    "TrainingHistory",
    "TwoPhaseModel",
    "accuracy",
    "adam_step",
    "apply_standardizer",
    "backward",
    "bce_loss",
    "build_phase1_spec",
    "build_phase2_spec",
    "clean",
    "confusion",
    "dense",
    "dropout",
    "f_score",
    "fisher_ratio",
    "fit",
    "fit_fisher",
    "fit_standardizer",
    "format_report",
    "forward",
    "history_to_csv",
    "init_network",
    "l2_penalty",
    "layer_param_counts",
    "load_csv",
    "load_lda",
    "load_network",
    "load_schema",
    "load_two_phase",
    "param_count",
    "precision",
    "predict",
    "predict_lda",
    "predict_two_phase",
    "read_history_csv",
    "recall",
    "report_dict",
    "save_lda",
    "save_network",
    "save_two_phase",
    "stratified_split",
    "train_two_phase",
    "transform_phase1",
    "__version__",
]
