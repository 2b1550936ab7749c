from typing import Sequence, Tuple

import numpy as np

from ..environments.base import TransitionTuple
from ..errors import DimensionMismatchError, EstimatorNotFittedError
from .features import FeatureBuilder
from .mlp import MlpParams, forward, grad, init_mlp, mse_output_loss
from .optimizer import Adam

DEFAULT_HIDDEN = (64, 64)


def regression_loss_arrays(params: MlpParams, features: np.ndarray, targets) -> Tuple[float, np.ndarray]:
    features = np.asarray(features, dtype=float)
    if features.ndim != 2 or features.shape[1] != params.input_size:
        raise DimensionMismatchError(
            f"reward features have width {features.shape[-1]}, network expects {params.input_size}"
        )
    return grad(params, mse_output_loss(targets), features)


def reward_regression_loss(params: MlpParams, batch: Sequence[TransitionTuple],
                           features: FeatureBuilder) -> Tuple[float, np.ndarray]:
    """Mean squared error of R-hat against the observed (corrupted) rewards, and its gradient"""
    if not batch:
        raise DimensionMismatchError("empty batch")
    if features.input_size != params.input_size:
        raise DimensionMismatchError(
            f"feature mode {features.mode.value} gives width {features.input_size}, network expects {params.input_size}"
        )
    x = features.transform(batch)
    y = np.array([t.reward_observed for t in batch])
    return regression_loss_arrays(params, x, y)


class RewardRegressor:
    """Parametric reward estimator R-hat trained by regression on observed rewards"""

    def __init__(self, features: FeatureBuilder, rng: np.random.Generator, lr: float = 3e-4,
                 hidden_sizes: Sequence[int] = DEFAULT_HIDDEN, max_grad_norm: float = 0.0):
        self.features = features
        self.params = init_mlp((features.input_size, *hidden_sizes, 1), rng, 1.0, 1.0)
        self.optimizer = Adam(lr=lr, max_grad_norm=max_grad_norm)
        self.updates = 0
        self.last_loss = float("nan")

    @classmethod
    def from_params(cls, features: FeatureBuilder, sizes: Sequence[int], theta: np.ndarray) -> "RewardRegressor":
        """Frozen regressor rebuilt from a parameter file; counts as fitted"""
        sizes = tuple(int(s) for s in sizes)
        if sizes[0] != features.input_size or sizes[-1] != 1:
            raise DimensionMismatchError(
                f"reward model sizes {sizes} do not fit {features.mode.value} features of width {features.input_size}")
        regressor = cls(features, np.random.default_rng(0), hidden_sizes=sizes[1:-1])
        regressor.params = MlpParams(sizes, np.asarray(theta, dtype=float).copy())
        regressor.updates = 1
        return regressor

    @property
    def fitted(self) -> bool:
        return self.updates > 0

    def predict_features(self, x: np.ndarray) -> np.ndarray:
        return forward(self.params, np.atleast_2d(x))[:, 0]

    def predict_transitions(self, transitions: Sequence[TransitionTuple]) -> np.ndarray:
        return self.predict_features(self.features.transform(transitions))

    def predict_transition(self, transition: TransitionTuple) -> float:
        if not self.fitted:
            raise EstimatorNotFittedError("Reward regressor has not been trained")
        return float(self.predict_transitions([transition])[0])

    def fit_step(self, x: np.ndarray, y: np.ndarray) -> float:
        """One regression step on encoded features; returns the pre-step loss"""
        loss, g = regression_loss_arrays(self.params, x, y)
        self.params.theta = self.optimizer.step(self.params.theta, g)
        self.updates += 1
        self.last_loss = loss
        return loss

    def fit_transitions(self, transitions: Sequence[TransitionTuple], steps: int = 1) -> float:
        x = self.features.transform(transitions)
        y = np.array([t.reward_observed for t in transitions])
        loss = float("nan")
        for _ in range(steps):
            loss = self.fit_step(x, y)
        return loss
