from dataclasses import dataclass, field
from typing import FrozenSet, Optional

import numpy as np

from ..environments.base import TransitionTuple
from ..environments.chain import ChainMdp
from ..errors import DimensionMismatchError, InvalidParameterError
from ..sources import RewardSource
from ..utils.logger import get_logger
from .estimator import SampleMeanEstimator

logger = get_logger(__name__)


@dataclass
class ValueTable:
    values: np.ndarray
    gamma: float = 1.0
    terminal_states: FrozenSet[int] = field(default_factory=frozenset)

    @classmethod
    def zeros(cls, num_states: int, gamma: float = 1.0, terminal_states=()) -> "ValueTable":
        return cls(np.zeros(num_states), float(gamma), frozenset(terminal_states))

    @classmethod
    def for_chain(cls, chain: ChainMdp) -> "ValueTable":
        return cls.zeros(chain.num_states, chain.gamma, (chain.terminal_state,))

    @property
    def nonterminal_mask(self) -> np.ndarray:
        mask = np.ones(len(self.values), dtype=bool)
        mask[list(self.terminal_states)] = False
        return mask

    def value(self, state: int, terminal: bool = False) -> float:
        if terminal or state in self.terminal_states:
            return 0.0
        return float(self.values[state])

    def rmse(self, truth) -> float:
        truth = np.asarray(truth, dtype=float)
        if truth.shape != self.values.shape:
            raise DimensionMismatchError(f"value table has {self.values.shape[0]} states, truth has {truth.shape}")
        mask = self.nonterminal_mask
        return rmse(self.values[mask], truth[mask])


def td_target(v: ValueTable, t: TransitionTuple, reward_source: RewardSource = RewardSource.SAMPLED,
              estimator: Optional[SampleMeanEstimator] = None) -> float:
    """One-step TD target r + gamma V(s'), with r sampled or taken from the estimator.

    An estimator that has not seen the key yet falls back to the sampled
    reward; the event is counted on the estimator.
    """
    reward = t.reward_observed
    if RewardSource(reward_source) is RewardSource.ESTIMATED:
        if estimator is None:
            raise InvalidParameterError("estimated reward source needs an estimator")
        key = estimator.key_for(t)
        if estimator.has(key):
            reward = estimator.predict(key)
        else:
            estimator.fallback_events += 1
            logger.debug("estimator fallback for unseen key %r", key)
    return reward + v.gamma * v.value(t.next_state, t.terminal)


def td_update(v: ValueTable, t: TransitionTuple, alpha: float,
              reward_source: RewardSource = RewardSource.SAMPLED,
              estimator: Optional[SampleMeanEstimator] = None) -> ValueTable:
    if not 0.0 < alpha <= 1.0:
        raise InvalidParameterError(f"alpha must lie in (0, 1], got {alpha}")
    if t.state in v.terminal_states:
        return v
    target = td_target(v, t, reward_source, estimator)
    v.values[t.state] += alpha * (target - v.values[t.state])
    return v


def rmse(values, truth) -> float:
    values = np.asarray(values, dtype=float)
    truth = np.asarray(truth, dtype=float)
    if values.shape != truth.shape:
        raise DimensionMismatchError(f"shape mismatch: {values.shape} vs {truth.shape}")
    if values.size == 0:
        return 0.0
    return float(np.sqrt(np.mean((values - truth) ** 2)))
