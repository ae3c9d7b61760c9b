"""Two-phase classifier: deep discriminator, then a scalar-input head.

Phase 1 is a wide sigmoid network that maps the feature vector to one
probability. Phase 2 is a small relu-plus-dropout head trained on those
scalar outputs against the same labels. The phases are trained
independently, in sequence, from one shared random stream.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

import numpy as np

from .data import Dataset, Standardizer
from .exceptions import DataError, ShapeError
from .linalg import Matrix
from .metrics import TrainingHistory
from .network import (
    Network,
    NetworkSpec,
    TrainConfig,
    dense,
    dropout,
    fit,
    forward,
    init_network,
    load_network,
    predict,
    save_network,
)
from .rng import SplitMix64

TWO_PHASE_FORMAT = "deeplda.two-phase/1"

PHASE1_HIDDEN = 1024
PHASE2_HIDDEN = 100
PHASE2_DROPOUT = 0.5


def build_phase1_spec(input_dim: int = 41, l2_lambda: float = 0.01) -> NetworkSpec:
    """Discriminator spec: three 1024-unit sigmoid layers, sigmoid output.

    The L2 coefficient applies to the hidden kernels only; the output
    kernel is left unregularized.
    """
    if input_dim < 1:
        raise ValueError(f"input_dim must be >= 1, got {input_dim}")
    return NetworkSpec(
        input_dim=input_dim,
        layers=(
            dense(PHASE1_HIDDEN, "sigmoid", l2_lambda),
            dense(PHASE1_HIDDEN, "sigmoid", l2_lambda),
            dense(PHASE1_HIDDEN, "sigmoid", l2_lambda),
            dense(1, "sigmoid"),
        ),
    )


def build_phase2_spec() -> NetworkSpec:
    """Head spec: scalar input, 100 relu units, dropout 0.5, sigmoid out."""
    return NetworkSpec(
        input_dim=1,
        layers=(
            dense(PHASE2_HIDDEN, "relu"),
            dropout(PHASE2_DROPOUT),
            dense(1, "sigmoid"),
        ),
    )


@dataclass
class TwoPhaseModel:
    """Both trained networks plus the preprocessing used to feed them.

    ``standardizer`` and ``feature_names`` describe what phase 1 expects;
    they are carried for serialization and later inference, never applied
    by the pipeline functions themselves.
    """

    phase1: Network
    phase2: Network
    config1: TrainConfig = field(default_factory=TrainConfig)
    config2: TrainConfig = field(default_factory=TrainConfig)
    standardizer: Standardizer | None = None
    feature_names: tuple[str, ...] | None = None
    seed: int | None = None

    def __post_init__(self):
        if self.phase1.spec.output_dim != 1:
            raise ShapeError("phase 1 must produce a single column")
        if self.phase2.spec.input_dim != 1:
            raise ShapeError("phase 2 must consume a single column")
        if self.feature_names is not None:
            object.__setattr__(self, "feature_names", tuple(self.feature_names))


def transform_phase1(model: TwoPhaseModel, x: Matrix) -> Matrix:
    """Infer-mode phase-1 probabilities: the (n, 1) input for phase 2."""
    out, _ = forward(model.phase1, x, mode="infer")
    return out


def train_two_phase(
    train: Dataset,
    val: Dataset,
    config1: TrainConfig,
    config2: TrainConfig,
    rng: SplitMix64,
    standardizer: Standardizer | None = None,
) -> tuple[TwoPhaseModel, TrainingHistory, TrainingHistory]:
    """Train both phases in sequence from one random stream.

    Draw order: phase-1 init, phase-1 fit, phase-2 init, phase-2 fit.
    Phase 1 learns on the given features; its infer-mode outputs on the
    train and validation rows become the datasets phase 2 trains on, so
    phase-2 history rows are measured on transformed validation data.
    The datasets are used as given (standardize beforehand if desired);
    ``standardizer`` is only recorded on the returned model.
    """
    if train.n_features != val.n_features:
        raise ShapeError(
            f"train has {train.n_features} features, validation has {val.n_features}"
        )
    phase1 = init_network(build_phase1_spec(train.n_features, config1.l2_lambda), rng)
    phase1, history1 = fit(phase1, train, val, config1, rng)

    model_stub = TwoPhaseModel(phase1=phase1, phase2=init_network(build_phase2_spec(), rng))
    z_train = transform_phase1(model_stub, train.x)
    z_val = transform_phase1(model_stub, val.x)
    train2 = Dataset(x=z_train, y=train.y, feature_names=("phase1_prob",))
    val2 = Dataset(x=z_val, y=val.y, feature_names=("phase1_prob",))
    phase2, history2 = fit(model_stub.phase2, train2, val2, config2, rng)

    model = TwoPhaseModel(
        phase1=phase1,
        phase2=phase2,
        config1=config1,
        config2=config2,
        standardizer=standardizer,
        feature_names=train.feature_names,
        seed=None,
    )
    return model, history1, history2


def predict_two_phase(
    model: TwoPhaseModel, x: Matrix, threshold: float = 0.5
) -> tuple[Matrix, np.ndarray]:
    """End-to-end probabilities and labels: phase 2 on phase-1 output."""
    return predict(model.phase2, transform_phase1(model, x), threshold)


PHASE1_FILE = "phase1.json"
PHASE2_FILE = "phase2.json"
MANIFEST_FILE = "manifest.json"


def save_two_phase(model: TwoPhaseModel, directory) -> None:
    """Write a model directory: both network files plus a manifest.

    The manifest records the per-phase configs, the seed, the feature
    names, and the standardizer, so a saved run can be reloaded and
    applied to fresh raw data.
    """
    os.makedirs(directory, exist_ok=True)
    save_network(model.phase1, os.path.join(directory, PHASE1_FILE), {"phase": 1})
    save_network(model.phase2, os.path.join(directory, PHASE2_FILE), {"phase": 2})
    manifest = {
        "format": TWO_PHASE_FORMAT,
        "config1": model.config1.to_dict(),
        "config2": model.config2.to_dict(),
        "seed": model.seed,
        "feature_names": list(model.feature_names) if model.feature_names else None,
        "standardizer": None
        if model.standardizer is None
        else {
            "mean": model.standardizer.mean.tolist(),
            "std": model.standardizer.std.tolist(),
        },
    }
    path = os.path.join(directory, MANIFEST_FILE)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        json.dump(manifest, fh, sort_keys=True, indent=2, allow_nan=False)
        fh.write("\n")


def load_two_phase(directory) -> TwoPhaseModel:
    """Load a directory written by :func:`save_two_phase`."""
    manifest_path = os.path.join(directory, MANIFEST_FILE)
    try:
        with open(manifest_path, encoding="utf-8") as fh:
            manifest = json.load(fh)
    except FileNotFoundError:
        raise DataError(f"model manifest not found: {manifest_path}") from None
    except json.JSONDecodeError as exc:
        raise DataError(f"model manifest {manifest_path} is not valid JSON: {exc}") from None
    if manifest.get("format") != TWO_PHASE_FORMAT:
        raise DataError(
            f"not a two-phase model directory (format={manifest.get('format')!r})"
        )
    std = None
    if manifest.get("standardizer") is not None:
        std = Standardizer(
            mean=np.asarray(manifest["standardizer"]["mean"], dtype=np.float64),
            std=np.asarray(manifest["standardizer"]["std"], dtype=np.float64),
        )
    names = manifest.get("feature_names")
    return TwoPhaseModel(
        phase1=load_network(os.path.join(directory, PHASE1_FILE)),
        phase2=load_network(os.path.join(directory, PHASE2_FILE)),
        config1=TrainConfig.from_dict(manifest["config1"]),
        config2=TrainConfig.from_dict(manifest["config2"]),
        standardizer=std,
        feature_names=tuple(names) if names else None,
        seed=manifest.get("seed"),
    )
