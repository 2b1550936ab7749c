"""Reward laws and joint (reward, discounted next value) laws used by the
Monte-Carlo variance checks. Every law knows its analytic moments so the
checks can compare against exact references."""

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from ..errors import InvalidParameterError

# trials per vectorized chunk; keeps (chunk, N) draws within a few hundred MB
CHUNK_TRIALS = 100_000


@dataclass(frozen=True)
class BernoulliReward:
    """``value`` with probability ``prob``, else 0"""

    value: float = 1.0
    prob: float = 0.5

    def __post_init__(self):
        if not 0.0 <= self.prob <= 1.0:
            raise InvalidParameterError(f"reward probability must be in [0, 1], got {self.prob}")

    @property
    def mean(self) -> float:
        return self.value * self.prob

    @property
    def variance(self) -> float:
        return self.prob * (1.0 - self.prob) * self.value ** 2

    def sample(self, rng: np.random.Generator, size) -> np.ndarray:
        return self.value * (rng.random(size) < self.prob)

    def sample_means(self, rng: np.random.Generator, n: int, trials: int) -> np.ndarray:
        return self.value * rng.binomial(n, self.prob, size=trials) / n


@dataclass(frozen=True)
class GaussianReward:
    mean: float = 0.0
    std: float = 1.0

    def __post_init__(self):
        if self.std < 0:
            raise InvalidParameterError(f"std must be non-negative, got {self.std}")

    @property
    def variance(self) -> float:
        return self.std ** 2

    def sample(self, rng: np.random.Generator, size) -> np.ndarray:
        return rng.normal(self.mean, self.std, size)

    def sample_means(self, rng: np.random.Generator, n: int, trials: int) -> np.ndarray:
        means = np.empty(trials)
        chunk = max(1, CHUNK_TRIALS // max(1, n // 10))
        for start in range(0, trials, chunk):
            stop = min(trials, start + chunk)
            means[start:stop] = self.sample(rng, (stop - start, n)).mean(axis=1)
        return means


@dataclass(frozen=True)
class JointLaw:
    """Discrete joint law of the measured transition's reward r and the
    discounted next-state value gamma*V(s').

    Outcome i has reward ``rewards[i]``, value ``values[i]`` and probability
    ``probs[i]``. Replays of the same transition draw rewards from the reward
    marginal, independent of the measured outcome.
    """

    rewards: Tuple[float, ...]
    values: Tuple[float, ...]
    probs: Tuple[float, ...]

    def __post_init__(self):
        if not (len(self.rewards) == len(self.values) == len(self.probs)) or not self.rewards:
            raise InvalidParameterError("joint law needs equally many rewards, values and probabilities")
        p = np.asarray(self.probs, dtype=float)
        if np.any(p < 0) or not np.isclose(p.sum(), 1.0):
            raise InvalidParameterError(f"probabilities must be non-negative and sum to 1, got {self.probs}")

    @classmethod
    def table(cls, outcomes: Sequence[Tuple[float, float, float]]) -> "JointLaw":
        """Build from ``(reward, value, probability)`` triples"""
        rewards, values, probs = zip(*outcomes)
        return cls(tuple(map(float, rewards)), tuple(map(float, values)), tuple(map(float, probs)))

    @classmethod
    def coupled(cls, value: float = 1.0, prob: float = 0.5, gain: float = 1.0) -> "JointLaw":
        """Bernoulli reward whose realization also moves the next state: gamma*V' = gain * r"""
        return cls.table([(0.0, 0.0, 1.0 - prob), (value, gain * value, prob)])

    @classmethod
    def independent(cls, value: float = 1.0, prob: float = 0.5, next_values=(0.0, 1.0)) -> "JointLaw":
        """Bernoulli reward independent of a next value uniform over ``next_values``"""
        q = 1.0 / len(next_values)
        outcomes = []
        for v in next_values:
            outcomes.append((0.0, v, (1.0 - prob) * q))
            outcomes.append((value, v, prob * q))
        return cls.table(outcomes)

    @classmethod
    def mixture(cls, value: float = 1.0) -> "JointLaw":
        """Bernoulli(0.5) reward; gamma*V' = r plus an independent 0-or-value step"""
        q = 0.25
        return cls.table([(0.0, 0.0, q), (0.0, value, q), (value, value, q), (value, 2.0 * value, q)])

    @classmethod
    def negative(cls) -> "JointLaw":
        """Two-point law with 2|cov| > var r: (r, gamma*V') = (1, 0) or (0, 2), each with probability 1/2"""
        return cls.table([(1.0, 0.0, 0.5), (0.0, 2.0, 0.5)])

    @property
    def _arrays(self):
        return np.asarray(self.rewards), np.asarray(self.values), np.asarray(self.probs)

    @property
    def mean_reward(self) -> float:
        r, _, p = self._arrays
        return float(p @ r)

    @property
    def mean_value(self) -> float:
        _, v, p = self._arrays
        return float(p @ v)

    @property
    def var_reward(self) -> float:
        r, _, p = self._arrays
        return float(p @ (r - self.mean_reward) ** 2)

    @property
    def var_value(self) -> float:
        _, v, p = self._arrays
        return float(p @ (v - self.mean_value) ** 2)

    @property
    def cov(self) -> float:
        r, v, p = self._arrays
        return float(p @ ((r - self.mean_reward) * (v - self.mean_value)))

    def sample(self, rng: np.random.Generator, size: int) -> Tuple[np.ndarray, np.ndarray]:
        r, v, p = self._arrays
        idx = rng.choice(len(p), size=size, p=p)
        return r[idx], v[idx]

    def sample_rewards(self, rng: np.random.Generator, size) -> np.ndarray:
        r, _, p = self._arrays
        return r[rng.choice(len(p), size=size, p=p)]

    def sample_estimated(self, rng: np.random.Generator, n: int, size: int):
        """Draws of (r, R-hat_N, gamma*V') sharing the measured outcome.

        R-hat_N averages the measured reward with ``n - 1`` independent
        replays of the same transition.
        """
        if n < 1:
            raise InvalidParameterError(f"N must be a positive integer, got {n}")
        r, v = self.sample(rng, size)
        r_hat = r.astype(float).copy()
        if n > 1:
            chunk = max(1, CHUNK_TRIALS * 10 // n)
            for start in range(0, size, chunk):
                stop = min(size, start + chunk)
                r_hat[start:stop] += self.sample_rewards(rng, (stop - start, n - 1)).sum(axis=1)
            r_hat /= n
        return r, r_hat, v
