from dataclasses import dataclass
from typing import Callable, List, Sequence, Tuple

import numpy as np

from ..errors import DimensionMismatchError, NonFiniteError


@dataclass
class MlpParams:
    """Parameters of a tanh multilayer perceptron with a linear output layer.

    All weights and biases live in one flat vector ``theta``. Per layer, the
    (fan_in, fan_out) weight matrix comes first (row-major), then the bias.
    """

    sizes: Tuple[int, ...]
    theta: np.ndarray

    def __post_init__(self):
        self.sizes = tuple(int(s) for s in self.sizes)
        if len(self.sizes) < 2 or min(self.sizes) < 1:
            raise DimensionMismatchError(f"layer sizes must be at least two positive integers, got {self.sizes}")
        self.theta = np.asarray(self.theta, dtype=float)
        if self.theta.shape != (parameter_count(self.sizes),):
            raise DimensionMismatchError(
                f"expected {parameter_count(self.sizes)} parameters for sizes {self.sizes}, got {self.theta.shape}"
            )

    @property
    def input_size(self) -> int:
        return self.sizes[0]

    @property
    def output_size(self) -> int:
        return self.sizes[-1]

    def with_theta(self, theta: np.ndarray) -> "MlpParams":
        return MlpParams(self.sizes, theta)

    def copy(self) -> "MlpParams":
        return MlpParams(self.sizes, self.theta.copy())

    def layers(self, theta: np.ndarray = None) -> List[Tuple[np.ndarray, np.ndarray]]:
        """(W, b) views into ``theta``"""
        theta = self.theta if theta is None else theta
        out = []
        offset = 0
        for fan_in, fan_out in zip(self.sizes[:-1], self.sizes[1:]):
            w = theta[offset: offset + fan_in * fan_out].reshape(fan_in, fan_out)
            offset += fan_in * fan_out
            b = theta[offset: offset + fan_out]
            offset += fan_out
            out.append((w, b))
        return out


def parameter_count(sizes: Sequence[int]) -> int:
    return int(sum((fan_in + 1) * fan_out for fan_in, fan_out in zip(sizes[:-1], sizes[1:])))


def orthogonal(rng: np.random.Generator, fan_in: int, fan_out: int, gain: float = 1.0) -> np.ndarray:
    flat = rng.normal(size=(max(fan_in, fan_out), min(fan_in, fan_out)))
    q, r = np.linalg.qr(flat)
    q *= np.sign(np.diag(r))
    if fan_in < fan_out:
        q = q.T
    return gain * q[:fan_in, :fan_out]


def init_mlp(sizes: Sequence[int], rng: np.random.Generator, hidden_gain: float = 1.0,
             output_gain: float = 1.0) -> MlpParams:
    """Orthogonal weights scaled by ``hidden_gain`` / ``output_gain``, zero biases"""
    params = MlpParams(tuple(sizes), np.zeros(parameter_count(sizes)))
    layers = params.layers()
    for index, (w, _) in enumerate(layers):
        gain = output_gain if index == len(layers) - 1 else hidden_gain
        w[...] = orthogonal(rng, w.shape[0], w.shape[1], gain)
    return params


@dataclass
class ForwardCache:
    activations: List[np.ndarray]  # input followed by each hidden layer output
    single: bool


def forward_cached(params: MlpParams, inputs) -> Tuple[np.ndarray, ForwardCache]:
    x = np.asarray(inputs, dtype=float)
    single = x.ndim == 1
    if single:
        x = x[None, :]
    if x.ndim != 2 or x.shape[1] != params.input_size:
        raise DimensionMismatchError(f"network expects inputs of width {params.input_size}, got shape {np.shape(inputs)}")
    if not np.all(np.isfinite(x)):
        raise NonFiniteError("non-finite network input", layer_index=0)
    layers = params.layers()
    activations = [x]
    h = x
    for index, (w, b) in enumerate(layers):
        z = h @ w + b
        if not np.all(np.isfinite(z)):
            raise NonFiniteError(f"non-finite pre-activation in layer {index}", layer_index=index)
        h = np.tanh(z) if index < len(layers) - 1 else z
        if index < len(layers) - 1:
            activations.append(h)
    return h, ForwardCache(activations, single)


def forward(params: MlpParams, inputs) -> np.ndarray:
    outputs, cache = forward_cached(params, inputs)
    return outputs[0] if cache.single else outputs


def backward(params: MlpParams, cache: ForwardCache, d_outputs) -> np.ndarray:
    """Gradient of a scalar loss w.r.t. ``theta`` given dLoss/dOutputs"""
    d = np.asarray(d_outputs, dtype=float)
    if cache.single and d.ndim == 1:
        d = d[None, :]
    layers = params.layers()
    grad = np.zeros_like(params.theta)
    grad_layers = params.layers(grad)
    for index in range(len(layers) - 1, -1, -1):
        w, _ = layers[index]
        if index < len(layers) - 1:
            h = cache.activations[index + 1]
            d = d * (1.0 - h * h)
        a_in = cache.activations[index]
        g_w, g_b = grad_layers[index]
        g_w[...] = a_in.T @ d
        g_b[...] = d.sum(axis=0)
        if not (np.all(np.isfinite(g_w)) and np.all(np.isfinite(g_b))):
            raise NonFiniteError(f"non-finite gradient in layer {index}", layer_index=index)
        d = d @ w.T
    return grad


OutputLoss = Callable[[np.ndarray], Tuple[float, np.ndarray]]


def grad(params: MlpParams, output_loss: OutputLoss, batch) -> Tuple[float, np.ndarray]:
    """Loss and its gradient for ``output_loss(outputs) -> (loss, dLoss/dOutputs)`` on ``batch``"""
    x = np.asarray(batch, dtype=float)
    if x.ndim == 1:
        x = x[None, :]
    if x.shape[0] == 0:
        raise DimensionMismatchError("empty batch")
    outputs, cache = forward_cached(params, x)
    loss, d_outputs = output_loss(outputs)
    return float(loss), backward(params, cache, d_outputs)


def mse_output_loss(targets) -> OutputLoss:
    """Mean squared error of a single-output network against ``targets``"""
    y = np.asarray(targets, dtype=float).reshape(-1, 1)

    def loss(outputs: np.ndarray):
        if outputs.shape != y.shape:
            raise DimensionMismatchError(f"outputs {outputs.shape} vs targets {y.shape}")
        diff = outputs - y
        return float(np.mean(diff ** 2)), 2.0 * diff / len(y)

    return loss
