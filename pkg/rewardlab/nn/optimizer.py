from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from ..errors import InvalidParameterError, NonFiniteError


@dataclass
class AdamState:
    m: np.ndarray
    v: np.ndarray
    t: int = 0

    @classmethod
    def zeros_like(cls, params: np.ndarray) -> "AdamState":
        return cls(np.zeros_like(params, dtype=float), np.zeros_like(params, dtype=float), 0)


def optimizer_step(state: AdamState, params: np.ndarray, grad: np.ndarray, lr: float,
                   beta1: float = 0.9, beta2: float = 0.999,
                   epsilon: float = 1e-8) -> Tuple[np.ndarray, AdamState]:
    """One bias-corrected adaptive-moment update; returns new params and state"""
    if lr <= 0:
        raise InvalidParameterError(f"learning rate must be positive, got {lr}")
    grad = np.asarray(grad, dtype=float)
    if not np.all(np.isfinite(grad)):
        raise NonFiniteError("non-finite gradient passed to the optimizer")
    t = state.t + 1
    m = beta1 * state.m + (1.0 - beta1) * grad
    v = beta2 * state.v + (1.0 - beta2) * (grad * grad)
    m_hat = m / (1.0 - beta1 ** t)
    v_hat = v / (1.0 - beta2 ** t)
    new_params = params - lr * m_hat / (np.sqrt(v_hat) + epsilon)
    return new_params, AdamState(m, v, t)


def clip_grad_norm(grad: np.ndarray, max_norm: float) -> np.ndarray:
    if max_norm is None or max_norm <= 0:
        return grad
    norm = float(np.linalg.norm(grad))
    if norm > max_norm:
        return grad * (max_norm / norm)
    return grad


@dataclass
class Adam:
    """Stateful wrapper over :func:`optimizer_step` for one flat parameter vector"""

    lr: float = 3e-4
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    max_grad_norm: float = 0.0
    state: AdamState = field(default=None)

    def step(self, params: np.ndarray, grad: np.ndarray) -> np.ndarray:
        if self.state is None:
            self.state = AdamState.zeros_like(params)
        grad = clip_grad_norm(np.asarray(grad, dtype=float), self.max_grad_norm)
        new_params, self.state = optimizer_step(self.state, params, grad, self.lr,
                                                self.beta1, self.beta2, self.epsilon)
        return new_params
