from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from ..errors import InvalidParameterError


class NoiseKind(str, Enum):
    GAUSSIAN = "gaussian"
    UNIFORM = "uniform"
    SPARSE = "sparse"


@dataclass(frozen=True)
class NoiseModel:
    """A stochastic reward-corruption channel.

    GAUSSIAN adds N(0, sigma^2); UNIFORM replaces the reward with a draw from
    U(low, high) with probability epsilon; SPARSE replaces it with 0 with
    probability epsilon.
    """

    kind: NoiseKind = NoiseKind.GAUSSIAN
    sigma: float = 0.0
    epsilon: float = 0.0
    uniform_low: float = -1.0
    uniform_high: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", NoiseKind(self.kind))
        if self.sigma < 0:
            raise InvalidParameterError(f"sigma must be nonnegative, got {self.sigma}")
        if not 0.0 <= self.epsilon <= 1.0:
            raise InvalidParameterError(f"epsilon must lie in [0, 1], got {self.epsilon}")
        if self.uniform_low > self.uniform_high:
            raise InvalidParameterError(f"uniform bounds reversed: low={self.uniform_low} > high={self.uniform_high}")

    @classmethod
    def identity(cls) -> "NoiseModel":
        return cls(NoiseKind.GAUSSIAN, sigma=0.0)

    @classmethod
    def gaussian(cls, sigma: float) -> "NoiseModel":
        return cls(NoiseKind.GAUSSIAN, sigma=sigma)

    @classmethod
    def uniform(cls, epsilon: float, low: float = -1.0, high: float = 1.0) -> "NoiseModel":
        return cls(NoiseKind.UNIFORM, epsilon=epsilon, uniform_low=low, uniform_high=high)

    @classmethod
    def sparse(cls, epsilon: float) -> "NoiseModel":
        return cls(NoiseKind.SPARSE, epsilon=epsilon)

    @property
    def level(self) -> float:
        """The sweep parameter: sigma for Gaussian, epsilon otherwise"""
        return self.sigma if self.kind is NoiseKind.GAUSSIAN else self.epsilon

    @property
    def is_identity(self) -> bool:
        return self.level == 0.0

    @property
    def uniform_mean(self) -> float:
        return 0.5 * (self.uniform_low + self.uniform_high)

    @property
    def uniform_variance(self) -> float:
        return (self.uniform_high - self.uniform_low) ** 2 / 12.0

    def label(self) -> str:
        if self.kind is NoiseKind.GAUSSIAN and self.sigma == 0.0:
            return "none"
        if self.kind is NoiseKind.UNIFORM and (self.uniform_low, self.uniform_high) != (-1.0, 1.0):
            return f"uniform:{self.epsilon:g}:{self.uniform_low:g}:{self.uniform_high:g}"
        return f"{self.kind.value}:{self.level:g}"


def parse_noise(text: Optional[str], low: float = -1.0, high: float = 1.0) -> NoiseModel:
    """Parse ``none``, ``gaussian:0.3``, ``uniform:0.3[:low:high]`` or ``sparse:0.9``"""
    if text is None or text.strip().lower() in ("", "none", "identity"):
        return NoiseModel.identity()
    parts = [p.strip() for p in text.strip().lower().split(":")]
    try:
        kind = NoiseKind(parts[0])
        allowed = (1, 2, 4) if kind is NoiseKind.UNIFORM else (1, 2)
        if len(parts) not in allowed:
            raise InvalidParameterError(f"Noise spec '{text}' has {len(parts)} parts; {kind.value} takes "
                                        f"{' or '.join(str(n) for n in allowed)}")
        level = float(parts[1]) if len(parts) > 1 else 0.0
        if kind is NoiseKind.GAUSSIAN:
            return NoiseModel.gaussian(level)
        if kind is NoiseKind.SPARSE:
            return NoiseModel.sparse(level)
        if len(parts) == 4:
            low, high = float(parts[2]), float(parts[3])
        return NoiseModel.uniform(level, low, high)
    except (ValueError, IndexError) as e:
        if isinstance(e, InvalidParameterError):
            raise
        raise InvalidParameterError(f"Cannot parse noise spec '{text}': {e}") from e


def corrupt(model: NoiseModel, reward_true: float, rng: np.random.Generator) -> float:
    """One corrupted observation of ``reward_true``"""
    if model.kind is NoiseKind.GAUSSIAN:
        if model.sigma == 0.0:
            return float(reward_true)
        return float(reward_true + rng.normal(0.0, model.sigma))
    if rng.random() < model.epsilon:
        if model.kind is NoiseKind.SPARSE:
            return 0.0
        return float(rng.uniform(model.uniform_low, model.uniform_high))
    return float(reward_true)


def corrupt_many(model: NoiseModel, rewards, rng: np.random.Generator) -> np.ndarray:
    """Vectorized :func:`corrupt` over an array of true rewards"""
    rewards = np.asarray(rewards, dtype=float)
    if model.kind is NoiseKind.GAUSSIAN:
        if model.sigma == 0.0:
            return rewards.copy()
        return rewards + rng.normal(0.0, model.sigma, size=rewards.shape)
    replaced = rng.random(rewards.shape) < model.epsilon
    if model.kind is NoiseKind.SPARSE:
        return np.where(replaced, 0.0, rewards)
    draws = rng.uniform(model.uniform_low, model.uniform_high, size=rewards.shape)
    return np.where(replaced, draws, rewards)


def expected_corrupted(model: NoiseModel, true_mean: float) -> float:
    if model.kind is NoiseKind.GAUSSIAN:
        return float(true_mean)
    if model.kind is NoiseKind.SPARSE:
        return (1.0 - model.epsilon) * true_mean
    return (1.0 - model.epsilon) * true_mean + model.epsilon * model.uniform_mean


def corrupted_variance(model: NoiseModel, true_mean: float, true_var: float) -> float:
    """Variance of the corrupted reward by the law of total variance"""
    if true_var < 0:
        raise InvalidParameterError(f"true_var must be nonnegative, got {true_var}")
    if model.kind is NoiseKind.GAUSSIAN:
        return true_var + model.sigma ** 2
    eps = model.epsilon
    if model.kind is NoiseKind.SPARSE:
        return (1.0 - eps) * true_var + eps * (1.0 - eps) * true_mean ** 2
    gap = true_mean - model.uniform_mean
    return (1.0 - eps) * true_var + eps * model.uniform_variance + eps * (1.0 - eps) * gap ** 2
