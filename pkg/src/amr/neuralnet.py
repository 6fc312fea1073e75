"""Dense and 1-D convolutional classifiers with hand-written backpropagation.

Two architectures are provided as layer lists: a two-layer perceptron with a
16-unit ReLU hidden layer, and a network with one 1-D convolution (64
filters of width 3, valid padding, stride 1, single input channel) followed
by four dense layers tapering 64-32-16-1. The final layer is always a
single sigmoid unit; training minimizes mean binary cross-entropy with
mini-batch gradient descent plus momentum.

Numerical notes: the loss is evaluated from pre-sigmoid values via softplus,
so it never takes log(0); the sigmoid is computed branch-wise and its output
clipped into (0, 1). Weights initialize uniformly in +/-sqrt(6/(fan_in +
fan_out)) (for the convolution, fan_in is the filter width and fan_out the
filter count), biases at zero, all from the config seed.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ._rng import rng_for
from .errors import Diverged, InputTooShort, ShapeMismatch

logger = logging.getLogger(__name__)

RELU = "relu"
SIGMOID = "sigmoid"

_PROB_EPS = 1e-12


@dataclass(frozen=True)
class Dense:
    out_width: int
    activation: str


@dataclass(frozen=True)
class Conv1D:
    n_filters: int
    filter_size: int
    activation: str = RELU


@dataclass(frozen=True)
class Flatten:
    pass


LayerSpec = Dense | Conv1D | Flatten


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.01
    momentum: float = 0.9
    epochs: int = 300
    batch_size: int = 16
    seed: int = 0

    def __post_init__(self):
        if self.learning_rate < 0:
            raise ValueError("learning_rate must be >= 0")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")


@dataclass
class LayerParams:
    weights: np.ndarray | None
    bias: np.ndarray | None


@dataclass
class NetworkParams:
    layers: list[LayerParams]

    def copy(self) -> "NetworkParams":
        return NetworkParams(
            [
                LayerParams(
                    None if lp.weights is None else lp.weights.copy(),
                    None if lp.bias is None else lp.bias.copy(),
                )
                for lp in self.layers
            ]
        )


def mlp_spec(input_dim: int) -> list[LayerSpec]:
    """Two-layer perceptron: 16 ReLU hidden units into one sigmoid output."""
    if input_dim < 1:
        raise ShapeMismatch("input_dim must be >= 1")
    return [Dense(16, RELU), Dense(1, SIGMOID)]


def cnn_spec(input_dim: int) -> list[LayerSpec]:
    """One 1-D convolution (64 filters of width 3) then four dense layers."""
    if input_dim < 3:
        raise InputTooShort(f"convolution of width 3 needs input_dim >= 3, got {input_dim}")
    return [
        Conv1D(64, 3, RELU),
        Flatten(),
        Dense(64, RELU),
        Dense(32, RELU),
        Dense(16, RELU),
        Dense(1, SIGMOID),
    ]


def _check_spec(spec: Sequence[LayerSpec]) -> None:
    if not spec or not isinstance(spec[-1], Dense) or spec[-1].out_width != 1:
        raise ShapeMismatch("network must end in Dense(1)")
    for i, layer in enumerate(spec):
        if isinstance(layer, Conv1D) and i != 0:
            raise ShapeMismatch("Conv1D is only supported as the first layer")
        activation = getattr(layer, "activation", None)
        if activation == SIGMOID and i != len(spec) - 1:
            raise ShapeMismatch("sigmoid belongs to the final layer only")
    if spec[-1].activation != SIGMOID:
        raise ShapeMismatch("final layer activation must be sigmoid")


def init_params(spec: Sequence[LayerSpec], input_dim: int, seed: int = 0) -> NetworkParams:
    """Seeded uniform Glorot initialization; biases start at zero."""
    _check_spec(spec)
    rng = rng_for(seed, "init")
    layers: list[LayerParams] = []
    width = input_dim  # dense width, or (filters, length) after a convolution
    conv_shape: tuple[int, int] | None = None
    for layer in spec:
        if isinstance(layer, Conv1D):
            if input_dim < layer.filter_size:
                raise InputTooShort(f"input_dim {input_dim} < filter size {layer.filter_size}")
            bound = np.sqrt(6.0 / (layer.filter_size + layer.n_filters))
            w = rng.uniform(-bound, bound, size=(layer.n_filters, layer.filter_size))
            layers.append(LayerParams(w, np.zeros(layer.n_filters)))
            conv_shape = (layer.n_filters, width - layer.filter_size + 1)
        elif isinstance(layer, Flatten):
            if conv_shape is None:
                raise ShapeMismatch("Flatten without a preceding convolution")
            width = conv_shape[0] * conv_shape[1]
            conv_shape = None
            layers.append(LayerParams(None, None))
        else:
            if conv_shape is not None:
                raise ShapeMismatch("Dense after Conv1D requires a Flatten")
            bound = np.sqrt(6.0 / (width + layer.out_width))
            w = rng.uniform(-bound, bound, size=(layer.out_width, width))
            layers.append(LayerParams(w, np.zeros(layer.out_width)))
            width = layer.out_width
    return NetworkParams(layers)


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _softplus(z: np.ndarray) -> np.ndarray:
    return np.maximum(z, 0.0) + np.log1p(np.exp(-np.abs(z)))


def _forward_cache(
    params: NetworkParams, spec: Sequence[LayerSpec], X: np.ndarray
) -> tuple[list, np.ndarray]:
    """Run the batch forward, caching per-layer inputs and pre-activations.

    Returns (cache, final_logits); cache[i] = (layer_input, pre_activation).
    """
    if len(params.layers) != len(spec):
        raise ShapeMismatch(f"{len(params.layers)} parameter blocks for {len(spec)} layers")
    a = X
    cache = []
    for layer, lp in zip(spec, params.layers):
        if isinstance(layer, Conv1D):
            if a.ndim != 2 or a.shape[1] < layer.filter_size:
                raise ShapeMismatch(f"convolution input shape {a.shape}")
            windows = np.lib.stride_tricks.sliding_window_view(a, layer.filter_size, axis=1)
            b, t, s = windows.shape
            # (B*T, S) @ (S, F) then back to (B, F, T); matmul beats einsum here
            zt = windows.reshape(b * t, s) @ lp.weights.T
            z = zt.reshape(b, t, -1).transpose(0, 2, 1) + lp.bias[None, :, None]
            cache.append((a, z))
            a = np.maximum(z, 0.0) if layer.activation == RELU else z
        elif isinstance(layer, Flatten):
            cache.append((a, None))
            a = a.reshape(a.shape[0], -1)
        else:
            if lp.weights.shape[1] != a.shape[1]:
                raise ShapeMismatch(
                    f"dense expects width {lp.weights.shape[1]}, got {a.shape[1]}"
                )
            z = a @ lp.weights.T + lp.bias
            cache.append((a, z))
            a = np.maximum(z, 0.0) if layer.activation == RELU else z
    return cache, a  # final activation is identity here; sigmoid applied by callers


def forward_batch(params: NetworkParams, spec: Sequence[LayerSpec], X: np.ndarray) -> np.ndarray:
    """Probabilities for a batch of rows, strictly inside (0, 1)."""
    _check_spec(spec)
    X = np.asarray(X, dtype=float)
    _, z = _forward_cache(params, spec, X)
    return np.clip(_sigmoid(z[:, 0]), _PROB_EPS, 1.0 - _PROB_EPS)


def forward(params: NetworkParams, spec: Sequence[LayerSpec], x: Sequence[float]) -> float:
    """Probability for a single encoded row."""
    return float(forward_batch(params, spec, np.asarray(x, dtype=float)[None, :])[0])


def bce_loss(
    params: NetworkParams, spec: Sequence[LayerSpec], X: np.ndarray, y: np.ndarray
) -> float:
    """Mean binary cross-entropy, evaluated stably from pre-sigmoid values."""
    _, zfin = _forward_cache(params, spec, np.asarray(X, dtype=float))
    z = zfin[:, 0]
    y = np.asarray(y, dtype=float)
    return float(np.mean(_softplus(z) - y * z))


def backprop(
    params: NetworkParams,
    spec: Sequence[LayerSpec],
    X: np.ndarray,
    y: np.ndarray,
) -> NetworkParams:
    """Gradients of mean binary cross-entropy for every weight and bias."""
    _check_spec(spec)
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2 or X.shape[0] == 0 or y.shape != (X.shape[0],):
        raise ShapeMismatch(f"batch shapes {X.shape} / {y.shape}")
    batch = X.shape[0]
    cache, zfin = _forward_cache(params, spec, X)

    grads = [LayerParams(None, None) for _ in spec]
    # Sigmoid + cross-entropy collapse to (prediction - label) at the logits.
    delta = (_sigmoid(zfin) - y[:, None]) / batch

    for i in range(len(spec) - 1, -1, -1):
        layer, lp = spec[i], params.layers[i]
        a_in, z = cache[i]
        if isinstance(layer, Dense):
            if layer.activation == RELU:
                delta = delta * (z > 0)
            grads[i] = LayerParams(delta.T @ a_in, delta.sum(axis=0))
            delta = delta @ lp.weights
        elif isinstance(layer, Flatten):
            delta = delta.reshape(a_in.shape)
        else:
            if layer.activation == RELU:
                delta = delta * (z > 0)
            windows = np.lib.stride_tricks.sliding_window_view(a_in, layer.filter_size, axis=1)
            b, t, s = windows.shape
            n_filters = delta.shape[1]
            dw = delta.transpose(1, 0, 2).reshape(n_filters, b * t) @ windows.reshape(b * t, s)
            db = delta.sum(axis=(0, 2))
            grads[i] = LayerParams(dw, db)
            # input gradient of the first layer is never needed
    return NetworkParams(grads)


def train(
    spec: Sequence[LayerSpec],
    X: np.ndarray,
    y: np.ndarray,
    config: TrainConfig = TrainConfig(),
    on_epoch: Callable[[int, float], None] | None = None,
) -> NetworkParams:
    """Mini-batch gradient descent with momentum; deterministic per seed.

    Batches come from a fresh seeded shuffle each epoch. Raises Diverged as
    soon as the epoch loss stops being finite.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2 or y.shape != (X.shape[0],):
        raise ShapeMismatch(f"training shapes {X.shape} / {y.shape}")
    if np.unique(y).size < 2:
        raise ShapeMismatch("training labels must contain both classes")
    if not np.isfinite(X).all():
        raise ShapeMismatch("training matrix contains non-finite values")
    n = X.shape[0]
    batch_size = min(config.batch_size, n)

    params = init_params(spec, X.shape[1], seed=config.seed)
    velocity = [
        LayerParams(
            None if lp.weights is None else np.zeros_like(lp.weights),
            None if lp.bias is None else np.zeros_like(lp.bias),
        )
        for lp in params.layers
    ]
    shuffle_rng = rng_for(config.seed, "batches")
    for epoch in range(config.epochs):
        order = shuffle_rng.permutation(n)
        for start in range(0, n, batch_size):
            take = order[start : start + batch_size]
            grads = backprop(params, spec, X[take], y[take])
            for lp, v, g in zip(params.layers, velocity, grads.layers):
                if lp.weights is None:
                    continue
                v.weights *= config.momentum
                v.weights -= config.learning_rate * g.weights
                v.bias *= config.momentum
                v.bias -= config.learning_rate * g.bias
                lp.weights += v.weights
                lp.bias += v.bias
        loss = bce_loss(params, spec, X, y)
        if not np.isfinite(loss):
            raise Diverged(f"loss became {loss} at epoch {epoch}")
        logger.debug("epoch %d: bce=%.6f", epoch, loss)
        if on_epoch is not None:
            on_epoch(epoch, loss)
    return params
