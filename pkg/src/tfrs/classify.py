"""Five-layer tanh MLP trained by full-batch gradient descent with momentum,
and the nearest-class-mean (minimum distance) classifier."""

from dataclasses import dataclass, field, replace

import numpy as np

from . import _binio
from .errors import LabelError, SizeError

__all__ = [
    "MlpConfig",
    "MlpModel",
    "MinDistModel",
    "TARGET_ON",
    "init_mlp",
    "encode_targets",
    "mlp_forward",
    "mlp_loss",
    "mlp_gradient",
    "mlp_train",
    "mlp_predict",
    "fit_min_distance",
    "classify_min_distance",
    "min_distance_predict",
    "mlp_to_bytes",
    "mlp_from_bytes",
    "min_distance_to_bytes",
    "min_distance_from_bytes",
]

MLP_MAGIC = b"TFRSMLP1"
MINDIST_MAGIC = b"TFRSMDC1"
TARGET_ON = 0.9  # one-hot targets are +0.9 / -0.9 to stay off the tanh asymptotes

_ACTIVATIONS = {
    # name: (f, f' expressed through the activation value)
    "tanh": (np.tanh, lambda a: 1.0 - a * a),
    "linear": (lambda z: z, lambda a: np.ones_like(a)),
}


@dataclass(frozen=True)
class MlpConfig:
    """Training setup. ``hidden`` holds the three hidden-layer widths; input and
    output widths come from the data."""

    hidden: tuple = (32, 32, 32)
    learning_rate: float = 0.02
    momentum: float = 0.9
    epochs: int = 2000
    seed: int = 0
    target_loss: float = 0.0
    normalize_inputs: bool = True
    activation: str = "tanh"

    def __post_init__(self):
        if len(self.hidden) != 3 or min(self.hidden) < 1:
            raise ValueError(f"need exactly three hidden widths >= 1, got {self.hidden}")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if not 0.0 <= self.momentum <= 1.0:
            raise ValueError("momentum must lie in [0, 1]")
        if self.activation not in _ACTIVATIONS:
            raise ValueError(f"unknown activation {self.activation!r}")


@dataclass
class MlpModel:
    weights: list  # (out, in) per trainable layer
    biases: list
    classes: list  # output unit i <-> classes[i]
    config: MlpConfig = field(default_factory=MlpConfig)
    loss_history: list = field(default_factory=list)

    @property
    def layer_sizes(self):
        return [self.weights[0].shape[1]] + [w.shape[0] for w in self.weights]


@dataclass(frozen=True)
class MinDistModel:
    prototypes: np.ndarray  # (W, k)
    classes: list
    counts: tuple = None  # training vectors per class; unknown for deserialized models


def init_mlp(layer_sizes, classes, config=MlpConfig()):
    """Weights and biases uniform in [-0.5, 0.5], drawn layer by layer from ``config.seed``."""
    if len(layer_sizes) != 5 or min(layer_sizes) < 1:
        raise ValueError(f"need five layer sizes >= 1, got {layer_sizes}")
    if len(classes) != layer_sizes[-1]:
        raise SizeError(f"{len(classes)} classes for {layer_sizes[-1]} output units")
    rng = np.random.default_rng(config.seed)
    weights, biases = [], []
    for n_in, n_out in zip(layer_sizes[:-1], layer_sizes[1:]):
        weights.append(rng.uniform(-0.5, 0.5, size=(n_out, n_in)))
        biases.append(rng.uniform(-0.5, 0.5, size=n_out))
    return MlpModel(weights, biases, list(classes), config)


def encode_targets(labels, classes):
    index = {c: i for i, c in enumerate(classes)}
    t = np.full((len(labels), len(classes)), -TARGET_ON)
    for row, label in enumerate(labels):
        if label not in index:
            raise LabelError(f"label {label!r} is not one of the model's classes")
        t[row, index[label]] = TARGET_ON
    return t


def mlp_forward(model, x):
    """Returns ``(activations, output)``; ``activations[0]`` is the input itself."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] != model.weights[0].shape[1]:
        raise SizeError(f"input length {x.shape[-1]} != {model.weights[0].shape[1]}")
    f, _ = _ACTIVATIONS[model.config.activation]
    acts = [x]
    for w, b in zip(model.weights, model.biases):
        acts.append(f(acts[-1] @ w.T + b))
    return acts, acts[-1]


def mlp_loss(model, x, targets):
    _, out = mlp_forward(model, x)
    return 0.5 * float(np.sum((np.asarray(targets) - out) ** 2))


def _loss_and_gradient(model, x, targets):
    _, df = _ACTIVATIONS[model.config.activation]
    acts, out = mlp_forward(model, x)
    residual = out - targets
    delta = residual * df(out)
    gw = [None] * len(model.weights)
    gb = [None] * len(model.weights)
    for layer in range(len(model.weights) - 1, -1, -1):
        gw[layer] = delta.T @ acts[layer]
        gb[layer] = delta.sum(axis=0)
        if layer:
            delta = (delta @ model.weights[layer]) * df(acts[layer])
    return 0.5 * float(np.sum(residual**2)), gw, gb


def mlp_gradient(model, x, targets):
    """Exact gradient of ``0.5 * sum((targets - output)^2)`` summed over the batch.

    Returns ``(weight_grads, bias_grads)`` shaped like the model's parameters.
    """
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    targets = np.atleast_2d(np.asarray(targets, dtype=np.float64))
    _, gw, gb = _loss_and_gradient(model, x, targets)
    return gw, gb


def _input_scaling(x):
    """Affine map ``x -> x * scale + offset`` sending each training column onto [-1, 1]."""
    lo, hi = x.min(axis=0), x.max(axis=0)
    span = hi - lo
    scale = np.where(span > 0, 2.0 / np.where(span > 0, span, 1.0), 1.0)
    offset = np.where(span > 0, -lo * scale - 1.0, -lo)
    return scale, offset


def mlp_train(train, cfg=MlpConfig(), classes=None):
    """Full-batch backpropagation with momentum.

    Each epoch applies ``dw = mc * dw_prev - (1 - mc) * lr * grad`` once, so
    ``mc = 0`` is plain gradient descent and ``mc = 1`` repeats the previous
    change (zero from the start). Training stops after ``cfg.epochs`` epochs
    or once the loss reaches ``cfg.target_loss``.

    With ``cfg.normalize_inputs`` the network trains on inputs rescaled to
    [-1, 1] per feature, and the rescaling is folded into the first layer
    afterwards so the returned model takes raw features.
    """
    if len(train) < 1:
        raise SizeError("empty training set")
    if classes is None:
        classes = list(dict.fromkeys(train.labels))
    targets = encode_targets(train.labels, classes)
    x = train.data
    if cfg.normalize_inputs:
        scale, offset = _input_scaling(x)
        x = x * scale + offset
    sizes = [x.shape[1], *cfg.hidden, len(classes)]
    model = init_mlp(sizes, classes, cfg)
    params = model.weights + model.biases
    velocity = [np.zeros_like(p) for p in params]
    lr, mc = cfg.learning_rate, cfg.momentum
    for _ in range(cfg.epochs):
        loss, gw, gb = _loss_and_gradient(model, x, targets)
        model.loss_history.append(loss)
        if loss <= cfg.target_loss:
            break
        for p, v, g in zip(params, velocity, gw + gb):
            v *= mc
            v -= (1.0 - mc) * lr * g
            p += v
    if cfg.normalize_inputs:
        w0 = model.weights[0]
        model.biases[0] = model.biases[0] + w0 @ offset
        model.weights[0] = w0 * scale
        model.config = replace(cfg, normalize_inputs=False)
    return model


def mlp_predict(model, x):
    """Class labels for each row of ``x``; ties resolve to the lowest output index."""
    _, out = mlp_forward(model, np.atleast_2d(x))
    return [model.classes[i] for i in np.argmax(out, axis=1)]


def fit_min_distance(train):
    """Per-class mean vectors, classes in order of first appearance."""
    if len(train) < 1:
        raise SizeError("empty training set")
    classes = list(dict.fromkeys(train.labels))
    labels = np.array([classes.index(c) for c in train.labels])
    protos, counts = [], []
    for j in range(len(classes)):
        rows = train.data[labels == j]
        protos.append(rows.sum(axis=0) / len(rows))
        counts.append(len(rows))
    return MinDistModel(np.array(protos), classes, tuple(counts))


def _distances(model, x):
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    if x.shape[1] != model.prototypes.shape[1]:
        raise SizeError(f"vector length {x.shape[1]} != prototype length {model.prototypes.shape[1]}")
    return np.sqrt(np.sum((x[:, None, :] - model.prototypes[None, :, :]) ** 2, axis=2))


def classify_min_distance(model, x):
    """Label of the nearest prototype by Euclidean distance; ties go to the earlier class."""
    return model.classes[int(np.argmin(_distances(model, x)[0]))]


def min_distance_predict(model, x):
    return [model.classes[i] for i in np.argmin(_distances(model, x), axis=1)]


def mlp_to_bytes(model):
    """``TFRSMLP1``, layer count, layer widths (u32), then each layer's weights and biases (f64)."""
    if model.config.activation != "tanh" or model.config.normalize_inputs:
        raise ValueError("only trained tanh models can be serialized")
    sizes = model.layer_sizes
    out = [MLP_MAGIC, _binio.u32(len(sizes)), _binio.u32(*sizes)]
    for w, b in zip(model.weights, model.biases):
        out += [_binio.f64(w), _binio.f64(b)]
    return b"".join(out)


def read_mlp(reader, classes=None):
    reader.magic(MLP_MAGIC)
    sizes = reader.u32(reader.u32())
    weights, biases = [], []
    for n_in, n_out in zip(sizes[:-1], sizes[1:]):
        weights.append(reader.f64(n_in * n_out).reshape(n_out, n_in))
        biases.append(reader.f64(n_out))
    if classes is None:
        classes = list(range(sizes[-1]))
    hidden = tuple(sizes[1:-1])
    return MlpModel(weights, biases, list(classes), MlpConfig(hidden=hidden, normalize_inputs=False))


def mlp_from_bytes(data, classes=None):
    return read_mlp(_binio.Reader(data), classes)


def min_distance_to_bytes(model):
    """``TFRSMDC1``, W, k (u32), W UTF-8 labels (u32 length prefix), prototypes (f64)."""
    w, k = model.prototypes.shape
    parts = [MINDIST_MAGIC, _binio.u32(w, k)]
    parts += [_binio.text(c) for c in model.classes]
    parts.append(_binio.f64(model.prototypes))
    return b"".join(parts)


def read_min_distance(reader):
    reader.magic(MINDIST_MAGIC)
    w, k = reader.u32(2)
    classes = [reader.text() for _ in range(w)]
    return MinDistModel(reader.f64(w * k).reshape(w, k), classes)


def min_distance_from_bytes(data):
    return read_min_distance(_binio.Reader(data))
