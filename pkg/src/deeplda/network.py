"""Dense feed-forward binary classifiers with hand-written backpropagation.

Layer conventions: a batch is an (n, features) matrix; a dense layer with
weights W of shape (fan_in, units) and a bias row b of shape (1, units)
computes ``act(x @ W + b)``. Dropout is inverted: at train time each unit
is zeroed with probability ``rate`` and survivors are scaled by
``1 / (1 - rate)``, so inference is a plain forward pass. The training
objective is binary cross-entropy on clamped probabilities plus the L2
kernel penalties (weights only, never biases) declared per layer, and
parameters are updated with bias-corrected Adam.

Everything here is deterministic given the :class:`~deeplda.rng.SplitMix64`
stream passed in; the draw order is documented on each consumer.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .data import Dataset
from .exceptions import ContractError, DataError, ShapeError
from .linalg import Matrix, add_row_broadcast, matmul, transpose
from .metrics import EpochRecord, TrainingHistory
from .rng import SplitMix64

ACTIVATIONS = ("sigmoid", "relu", "none")

# Probability clamp for the cross-entropy; matches the Adam epsilon scale.
BCE_EPS = 1e-7


def _sigmoid(z: np.ndarray) -> np.ndarray:
    # Two-branch form avoids exp overflow for large |z|.
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _activate(name: str, z: np.ndarray) -> np.ndarray:
    if name == "sigmoid":
        return _sigmoid(z)
    if name == "relu":
        return np.maximum(z, 0.0)
    return z


def _activation_gradient(name: str, a_out: np.ndarray) -> np.ndarray:
    """d act / d z expressed through the activation output."""
    if name == "sigmoid":
        return a_out * (1.0 - a_out)
    if name == "relu":
        # Subgradient 0 at z == 0.
        return (a_out > 0.0).astype(np.float64)
    return np.ones_like(a_out)


@dataclass(frozen=True)
class LayerSpec:
    """One layer: a dense transform or a dropout regularizer.

    Dense layers use ``units``, ``activation`` and ``l2_lambda``; dropout
    layers use ``rate`` only.
    """

    kind: str
    units: int = 0
    activation: str = "none"
    l2_lambda: float = 0.0
    rate: float = 0.0

    def __post_init__(self):
        if self.kind == "dense":
            if self.units < 1:
                raise ValueError(f"dense layer needs units >= 1, got {self.units}")
            if self.activation not in ACTIVATIONS:
                raise ValueError(
                    f"unknown activation {self.activation!r}; choose from {ACTIVATIONS}"
                )
            if self.l2_lambda < 0:
                raise ValueError(f"l2_lambda must be >= 0, got {self.l2_lambda}")
        elif self.kind == "dropout":
            if not 0.0 <= self.rate < 1.0:
                raise ValueError(f"dropout rate must lie in [0, 1), got {self.rate}")
        else:
            raise ValueError(f"unknown layer kind {self.kind!r}")

    def to_dict(self) -> dict:
        if self.kind == "dense":
            return {
                "kind": "dense",
                "units": self.units,
                "activation": self.activation,
                "l2_lambda": self.l2_lambda,
            }
        return {"kind": "dropout", "rate": self.rate}

    @staticmethod
    def from_dict(d: dict) -> "LayerSpec":
        if d.get("kind") == "dense":
            return dense(int(d["units"]), str(d["activation"]), float(d.get("l2_lambda", 0.0)))
        if d.get("kind") == "dropout":
            return dropout(float(d["rate"]))
        raise ValueError(f"unknown layer kind in {d!r}")


def dense(units: int, activation: str = "none", l2_lambda: float = 0.0) -> LayerSpec:
    return LayerSpec(kind="dense", units=units, activation=activation, l2_lambda=l2_lambda)


def dropout(rate: float) -> LayerSpec:
    return LayerSpec(kind="dropout", rate=rate)


@dataclass(frozen=True)
class NetworkSpec:
    """Declarative architecture: input width plus an ordered layer list."""

    input_dim: int
    layers: tuple[LayerSpec, ...]

    def __post_init__(self):
        if self.input_dim < 1:
            raise ValueError(f"input_dim must be >= 1, got {self.input_dim}")
        object.__setattr__(self, "layers", tuple(self.layers))

    def dense_shapes(self) -> list[tuple[int, int]]:
        """(fan_in, units) for each dense layer, chained through the stack."""
        shapes = []
        width = self.input_dim
        for layer in self.layers:
            if layer.kind == "dense":
                shapes.append((width, layer.units))
                width = layer.units
        return shapes

    @property
    def output_dim(self) -> int:
        width = self.input_dim
        for layer in self.layers:
            if layer.kind == "dense":
                width = layer.units
        return width

    def has_binary_output(self) -> bool:
        if not self.layers:
            return False
        last = self.layers[-1]
        return last.kind == "dense" and last.units == 1 and last.activation == "sigmoid"

    def to_dict(self) -> dict:
        return {"input_dim": self.input_dim, "layers": [l.to_dict() for l in self.layers]}

    @staticmethod
    def from_dict(d: dict) -> "NetworkSpec":
        return NetworkSpec(
            input_dim=int(d["input_dim"]),
            layers=tuple(LayerSpec.from_dict(l) for l in d["layers"]),
        )


def layer_param_counts(spec: NetworkSpec) -> list[int]:
    """Trainable parameters per layer; dropout layers contribute 0."""
    counts = []
    shapes = iter(spec.dense_shapes())
    for layer in spec.layers:
        if layer.kind == "dense":
            fan_in, units = next(shapes)
            counts.append(fan_in * units + units)
        else:
            counts.append(0)
    return counts


def param_count(spec: NetworkSpec) -> int:
    """Total trainable parameters (weights plus biases) of a spec."""
    return sum(layer_param_counts(spec))


@dataclass
class AdamState:
    """Per-parameter Adam moments; m and v are zero until the first step."""

    m: np.ndarray
    v: np.ndarray
    t: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-7

    @staticmethod
    def zeros(shape: tuple[int, ...]) -> "AdamState":
        return AdamState(m=np.zeros(shape), v=np.zeros(shape))


@dataclass(frozen=True)
class TrainConfig:
    """Hyperparameters of one training run.

    Defaults follow the reference experiment: learning rate 1e-5, 100
    epochs, batches of 64, L2 coefficient 0.01 on regularized kernels.
    ``epochs=0`` is allowed and makes ``fit`` a no-op.
    """

    learning_rate: float = 1e-5
    epochs: int = 100
    batch_size: int = 64
    l2_lambda: float = 0.01
    seed: int = 0
    threshold: float = 0.5

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError(f"learning_rate must be > 0, got {self.learning_rate}")
        if self.epochs < 0:
            raise ValueError(f"epochs must be >= 0, got {self.epochs}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.l2_lambda < 0:
            raise ValueError(f"l2_lambda must be >= 0, got {self.l2_lambda}")
        if not 0.0 < self.threshold < 1.0:
            raise ValueError(f"threshold must lie in (0, 1), got {self.threshold}")

    def to_dict(self) -> dict:
        return {
            "learning_rate": self.learning_rate,
            "epochs": self.epochs,
            "batch_size": self.batch_size,
            "l2_lambda": self.l2_lambda,
            "seed": self.seed,
            "threshold": self.threshold,
        }

    @staticmethod
    def from_dict(d: dict) -> "TrainConfig":
        return TrainConfig(**d)


class Network:
    """Instantiated parameters for a :class:`NetworkSpec`.

    ``version`` counts optimizer steps; forward caches remember the
    version they were computed against so a stale cache cannot silently
    feed a backward pass.
    """

    def __init__(self, spec: NetworkSpec, weights: list[np.ndarray], biases: list[np.ndarray]):
        shapes = spec.dense_shapes()
        if len(weights) != len(shapes) or len(biases) != len(shapes):
            raise ShapeError(
                f"spec has {len(shapes)} dense layers but got "
                f"{len(weights)} weight and {len(biases)} bias arrays"
            )
        self.spec = spec
        self.weights = []
        self.biases = []
        for k, (fan_in, units) in enumerate(shapes):
            w = np.ascontiguousarray(np.asarray(weights[k], dtype=np.float64))
            b = np.ascontiguousarray(np.asarray(biases[k], dtype=np.float64))
            if w.shape != (fan_in, units):
                raise ShapeError(
                    f"dense layer {k}: expected weights {(fan_in, units)}, got {w.shape}"
                )
            if b.shape != (1, units):
                raise ShapeError(f"dense layer {k}: expected bias (1, {units}), got {b.shape}")
            self.weights.append(w)
            self.biases.append(b)
        self.adam_w = [AdamState.zeros(w.shape) for w in self.weights]
        self.adam_b = [AdamState.zeros(b.shape) for b in self.biases]
        self.version = 0

    @property
    def n_params(self) -> int:
        return param_count(self.spec)

    def dense_layers(self) -> list[LayerSpec]:
        return [l for l in self.spec.layers if l.kind == "dense"]


def init_network(spec: NetworkSpec, rng: SplitMix64) -> Network:
    """Fresh network: Glorot-uniform weights, zero biases, zero Adam state.

    Each dense layer's weights are drawn in stack order as one row-major
    block from ``[-sqrt(6/(fan_in+units)), +sqrt(6/(fan_in+units))]``.
    """
    if not spec.has_binary_output():
        raise ValueError("spec must end in a dense layer with 1 unit and sigmoid activation")
    weights = []
    biases = []
    for fan_in, units in spec.dense_shapes():
        limit = np.sqrt(6.0 / (fan_in + units))
        weights.append(rng.uniform_matrix(fan_in, units, -limit, limit))
        biases.append(np.zeros((1, units)))
    return Network(spec, weights, biases)


@dataclass
class ForwardCache:
    """Intermediate activations and dropout masks from one forward pass."""

    version: int
    mode: str
    records: list[tuple] = field(default_factory=list)
    output_shape: tuple[int, int] = (0, 0)

    def dropout_masks(self) -> list[np.ndarray]:
        """Scaled masks in layer order (for replaying a frozen pass)."""
        return [rec[1] for rec in self.records if rec[0] == "dropout" and rec[1] is not None]


def forward(
    net: Network,
    x: Matrix,
    mode: str = "infer",
    rng: SplitMix64 | None = None,
    dropout_masks: list[np.ndarray] | None = None,
) -> tuple[Matrix, ForwardCache]:
    """Run the network on a batch.

    In train mode dropout masks are drawn from ``rng`` (one block per
    dropout layer, in stack order), or taken from ``dropout_masks`` to
    replay a frozen pass. In infer mode dropout is the identity and no
    randomness is consumed.
    """
    if mode not in ("train", "infer"):
        raise ValueError(f"mode must be 'train' or 'infer', got {mode!r}")
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != net.spec.input_dim:
        raise ShapeError(
            f"input has shape {x.shape}, network expects (n, {net.spec.input_dim})"
        )
    cache = ForwardCache(version=net.version, mode=mode)
    a = x
    dense_i = 0
    mask_i = 0
    for layer in net.spec.layers:
        if layer.kind == "dense":
            z = add_row_broadcast(matmul(a, net.weights[dense_i]), net.biases[dense_i])
            a_out = _activate(layer.activation, z)
            cache.records.append(("dense", dense_i, a, a_out))
            a = a_out
            dense_i += 1
        else:
            if mode == "train":
                if dropout_masks is not None:
                    mask = np.asarray(dropout_masks[mask_i], dtype=np.float64)
                    if mask.shape != a.shape:
                        raise ShapeError(
                            f"dropout mask {mask_i} has shape {mask.shape}, activations {a.shape}"
                        )
                    mask_i += 1
                else:
                    if rng is None:
                        raise ValueError("train-mode forward through dropout needs an rng")
                    keep = rng.uniforms(a.size).reshape(a.shape) >= layer.rate
                    mask = keep.astype(np.float64) / (1.0 - layer.rate)
                a = a * mask
                cache.records.append(("dropout", mask))
            else:
                cache.records.append(("dropout", None))
    cache.output_shape = a.shape
    return a, cache


def bce_loss(pred: Matrix, y: Matrix) -> tuple[float, Matrix]:
    """Binary cross-entropy over clamped probabilities, with its gradient.

    Probabilities are clamped to [BCE_EPS, 1 - BCE_EPS] before the logs;
    the returned gradient is d loss / d pred of that clamped composite, so
    it is exactly zero where the clamp is active.
    """
    pred = np.asarray(pred, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if pred.shape != y.shape or pred.ndim != 2 or pred.shape[1] != 1:
        raise ShapeError(
            f"pred and y must share shape (n, 1); got {pred.shape} and {y.shape}"
        )
    if not np.all((y == 0.0) | (y == 1.0)):
        raise DataError("labels must all be 0 or 1")
    n = pred.shape[0]
    p = np.clip(pred, BCE_EPS, 1.0 - BCE_EPS)
    loss = float(-np.mean(y * np.log(p) + (1.0 - y) * np.log(1.0 - p)))
    interior = (pred > BCE_EPS) & (pred < 1.0 - BCE_EPS)
    grad = np.where(interior, -(y / p - (1.0 - y) / (1.0 - p)) / n, 0.0)
    return loss, grad


def _l2_value(net: Network) -> float:
    """Total L2 kernel penalty under each layer's own coefficient."""
    total = 0.0
    for layer, w in zip(net.dense_layers(), net.weights):
        if layer.l2_lambda > 0.0:
            total += layer.l2_lambda * float(np.sum(w * w))
    return total


def l2_penalty(net: Network, lam: float | None = None) -> tuple[float, list[np.ndarray]]:
    """L2 penalty over dense-layer weights (biases excluded) and its gradient.

    With ``lam=None`` each layer's spec coefficient applies (this is what
    training uses); passing a float applies that single coefficient to
    every dense layer's weights.
    """
    if lam is not None and lam < 0:
        raise ValueError(f"lambda must be >= 0, got {lam}")
    penalty = 0.0
    grads = []
    for layer, w in zip(net.dense_layers(), net.weights):
        coeff = layer.l2_lambda if lam is None else lam
        penalty += coeff * float(np.sum(w * w))
        grads.append(2.0 * coeff * w)
    return penalty, grads


@dataclass
class Gradients:
    """d objective / d parameter, aligned with Network.weights / .biases."""

    weights: list[np.ndarray]
    biases: list[np.ndarray]


def backward(net: Network, cache: ForwardCache, loss_grad: Matrix) -> Gradients:
    """Reverse-mode gradients of loss plus the per-layer L2 penalties.

    The cache must come from a forward pass against the network's current
    parameters; dropout layers reuse the exact mask and scaling recorded
    there.
    """
    if cache.version != net.version:
        raise ContractError(
            f"stale forward cache: computed at version {cache.version}, "
            f"network is at version {net.version}"
        )
    loss_grad = np.asarray(loss_grad, dtype=np.float64)
    if loss_grad.shape != cache.output_shape:
        raise ShapeError(
            f"loss gradient has shape {loss_grad.shape}, forward output was {cache.output_shape}"
        )
    dense_specs = net.dense_layers()
    d_weights: list[np.ndarray] = [None] * len(net.weights)  # type: ignore[list-item]
    d_biases: list[np.ndarray] = [None] * len(net.biases)  # type: ignore[list-item]
    delta = loss_grad
    for rec in reversed(cache.records):
        if rec[0] == "dense":
            _, k, a_in, a_out = rec
            dz = delta * _activation_gradient(dense_specs[k].activation, a_out)
            dw = matmul(transpose(a_in), dz)
            lam = dense_specs[k].l2_lambda
            if lam > 0.0:
                dw = dw + 2.0 * lam * net.weights[k]
            d_weights[k] = dw
            d_biases[k] = dz.sum(axis=0, keepdims=True)
            delta = matmul(dz, transpose(net.weights[k]))
        else:
            mask = rec[1]
            if mask is not None:
                delta = delta * mask
    return Gradients(weights=d_weights, biases=d_biases)


def adam_step(net: Network, grads: Gradients, learning_rate: float) -> Network:
    """One Adam update over every parameter, in place.

    t += 1; m, v track the first and second gradient moments; the update
    is ``lr * mhat / (sqrt(vhat) + eps)`` with bias-corrected moments.
    """
    if learning_rate <= 0:
        raise ValueError(f"learning_rate must be > 0, got {learning_rate}")
    if len(grads.weights) != len(net.weights) or len(grads.biases) != len(net.biases):
        raise ShapeError("gradient list lengths do not match the network")
    for params, gs, states in (
        (net.weights, grads.weights, net.adam_w),
        (net.biases, grads.biases, net.adam_b),
    ):
        for i, g in enumerate(gs):
            if g.shape != params[i].shape:
                raise ShapeError(
                    f"gradient {i} has shape {g.shape}, parameter has {params[i].shape}"
                )
            st = states[i]
            st.t += 1
            st.m = st.beta1 * st.m + (1.0 - st.beta1) * g
            st.v = st.beta2 * st.v + (1.0 - st.beta2) * (g * g)
            mhat = st.m / (1.0 - st.beta1**st.t)
            vhat = st.v / (1.0 - st.beta2**st.t)
            params[i] = params[i] - learning_rate * mhat / (np.sqrt(vhat) + st.epsilon)
    net.version += 1
    return net


def predict(net: Network, x: Matrix, threshold: float = 0.5) -> tuple[Matrix, np.ndarray]:
    """Infer-mode probabilities and hard labels (prob >= threshold -> 1)."""
    probs, _ = forward(net, x, mode="infer")
    labels = (probs[:, 0] >= threshold).astype(np.int64)
    return probs, labels


def fit(
    net: Network,
    train: Dataset,
    val: Dataset,
    config: TrainConfig,
    rng: SplitMix64,
) -> tuple[Network, TrainingHistory]:
    """Mini-batch training loop.

    Per epoch: shuffle the training rows (one permutation draw), walk
    mini-batches of ``config.batch_size`` including the final partial one,
    and for each run forward (train mode, dropout masks drawn per batch),
    binary cross-entropy plus L2 penalty, backward, and one Adam step.
    Train metrics are batch-size-weighted running averages computed before
    each update; validation metrics come from one full infer-mode pass
    after the epoch. Reported losses include the L2 penalty.
    """
    if train.n_rows < 1:
        raise DataError("training set is empty")
    if train.n_features != net.spec.input_dim:
        raise ShapeError(
            f"training features have width {train.n_features}, "
            f"network expects {net.spec.input_dim}"
        )
    if val.n_features != net.spec.input_dim:
        raise ShapeError(
            f"validation features have width {val.n_features}, "
            f"network expects {net.spec.input_dim}"
        )
    n = train.n_rows
    y_train = train.y.reshape(-1, 1)
    y_val = val.y.reshape(-1, 1)
    val_truth = val.y >= 0.5
    history = TrainingHistory()
    for epoch in range(1, config.epochs + 1):
        order = rng.permutation(n)
        xs = train.x[order]
        ys = y_train[order]
        correct = 0
        loss_sum = 0.0
        for start in range(0, n, config.batch_size):
            xb = xs[start : start + config.batch_size]
            yb = ys[start : start + config.batch_size]
            out, cache = forward(net, xb, mode="train", rng=rng)
            bce, grad = bce_loss(out, yb)
            loss_sum += (bce + _l2_value(net)) * xb.shape[0]
            pred_pos = out[:, 0] >= config.threshold
            correct += int(np.sum(pred_pos == (yb[:, 0] >= 0.5)))
            adam_step(net, backward(net, cache, grad), config.learning_rate)
        val_out, _ = forward(net, val.x, mode="infer")
        val_bce, _ = bce_loss(val_out, y_val)
        val_acc = float(np.mean((val_out[:, 0] >= config.threshold) == val_truth))
        history.append(
            EpochRecord(
                epoch=epoch,
                accuracy=correct / n,
                loss=loss_sum / n,
                val_accuracy=val_acc,
                val_loss=val_bce + _l2_value(net),
            )
        )
    return net, history


# --- serialization ---------------------------------------------------------

NETWORK_FORMAT = "deeplda.network/1"


def network_to_dict(net: Network, metadata: dict | None = None) -> dict:
    """JSON-compatible snapshot: spec, weights and biases as nested lists."""
    return {
        "format": NETWORK_FORMAT,
        "spec": net.spec.to_dict(),
        "weights": [w.tolist() for w in net.weights],
        "biases": [b.tolist() for b in net.biases],
        "metadata": metadata or {},
    }


def network_from_dict(d: dict) -> Network:
    if d.get("format") != NETWORK_FORMAT:
        raise DataError(f"not a serialized network (format={d.get('format')!r})")
    spec = NetworkSpec.from_dict(d["spec"])
    weights = [np.asarray(w, dtype=np.float64) for w in d["weights"]]
    biases = [np.asarray(b, dtype=np.float64) for b in d["biases"]]
    return Network(spec, weights, biases)


def save_network(net: Network, path, metadata: dict | None = None) -> None:
    """Write a value-exact JSON snapshot (floats keep full precision)."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        json.dump(network_to_dict(net, metadata), fh, sort_keys=True,
                  separators=(",", ":"), allow_nan=False)
        fh.write("\n")


def load_network(path) -> Network:
    """Load a snapshot written by :func:`save_network` (Adam state fresh)."""
    try:
        with open(path, encoding="utf-8") as fh:
            d = json.load(fh)
    except FileNotFoundError:
        raise DataError(f"model file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise DataError(f"model file {path} is not valid JSON: {exc}") from None
    return network_from_dict(d)
