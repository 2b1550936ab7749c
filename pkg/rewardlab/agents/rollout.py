from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Union

import numpy as np

from ..environments.base import TransitionTuple
from ..errors import DimensionMismatchError, InvalidParameterError
from ..sources import RewardSource, SourceSpec


@dataclass
class WarmupSchedule:
    """Linear ramp of the weight placed on R-hat: w(u) = min(1, u / total)"""

    total_warmup_updates: int = 0
    current_update: int = 0

    def __post_init__(self):
        if self.total_warmup_updates < 0:
            raise InvalidParameterError(f"warm-up length must be nonnegative, got {self.total_warmup_updates}")

    @classmethod
    def for_budget(cls, updates: int, fraction: float = 0.2) -> "WarmupSchedule":
        return cls(int(round(fraction * updates)))

    def weight(self) -> float:
        if self.total_warmup_updates == 0:
            return 1.0
        return min(1.0, self.current_update / self.total_warmup_updates)

    def advance(self) -> "WarmupSchedule":
        self.current_update += 1
        return self


@dataclass(frozen=True)
class AdvantageConfig:
    gamma: float = 0.99
    lam: float = 0.95
    clip_epsilon: float = 0.2

    def __post_init__(self):
        if not 0.0 < self.gamma <= 1.0:
            raise InvalidParameterError(f"gamma must lie in (0, 1], got {self.gamma}")
        if not 0.0 <= self.lam <= 1.0:
            raise InvalidParameterError(f"lambda must lie in [0, 1], got {self.lam}")
        if not 0.0 < self.clip_epsilon < 1.0:
            raise InvalidParameterError(f"clip epsilon must lie in (0, 1), got {self.clip_epsilon}")


@dataclass
class RolloutBatch:
    """Consecutive transitions of one environment copy with the critic's and R-hat's predictions.

    ``next_values[t]`` is V(s_{t+1}); it is forced to 0 on terminal steps. The
    last entry is the bootstrap value for the state after the batch.
    """

    transitions: List[TransitionTuple]
    values: np.ndarray
    next_values: np.ndarray
    reward_predictions: Optional[np.ndarray] = None
    log_probs: Optional[np.ndarray] = None
    terminals: np.ndarray = field(init=False)
    dones: np.ndarray = field(init=False)

    def __post_init__(self):
        n = len(self.transitions)
        self.values = np.asarray(self.values, dtype=float).reshape(-1)
        self.next_values = np.asarray(self.next_values, dtype=float).reshape(-1).copy()
        if self.reward_predictions is None:
            self.reward_predictions = self.observed_rewards.copy()
        self.reward_predictions = np.asarray(self.reward_predictions, dtype=float).reshape(-1)
        for name in ("values", "next_values", "reward_predictions"):
            if len(getattr(self, name)) != n:
                raise DimensionMismatchError(f"{name} has {len(getattr(self, name))} entries for {n} transitions")
        if self.log_probs is not None and len(self.log_probs) != n:
            raise DimensionMismatchError(f"log_probs has {len(self.log_probs)} entries for {n} transitions")
        self.terminals = np.array([t.terminal for t in self.transitions], dtype=bool)
        self.dones = np.array([t.done for t in self.transitions], dtype=bool)
        self.next_values[self.terminals] = 0.0

    def __len__(self) -> int:
        return len(self.transitions)

    @property
    def observed_rewards(self) -> np.ndarray:
        return np.array([t.reward_observed for t in self.transitions], dtype=float)

    @property
    def true_rewards(self) -> np.ndarray:
        return np.array([t.reward_true for t in self.transitions], dtype=float)

    @property
    def bootstrap_value(self) -> float:
        return float(self.next_values[-1]) if len(self) else 0.0


def effective_reward(t: TransitionTuple, r_hat: float, schedule: Optional[WarmupSchedule] = None) -> float:
    """Convex mix w * r_hat + (1 - w) * observed reward, w from the warm-up schedule"""
    w = 1.0 if schedule is None else schedule.weight()
    return w * r_hat + (1.0 - w) * t.reward_observed


def _is_estimated(reward_source: Union[RewardSource, SourceSpec]) -> bool:
    if isinstance(reward_source, SourceSpec):
        return reward_source.estimated
    return RewardSource(reward_source) is RewardSource.ESTIMATED


def training_rewards(batch: RolloutBatch, reward_source, schedule: Optional[WarmupSchedule] = None) -> np.ndarray:
    observed = batch.observed_rewards
    if not _is_estimated(reward_source):
        return observed
    w = 1.0 if schedule is None else schedule.weight()
    return w * batch.reward_predictions + (1.0 - w) * observed


def gae_advantages(batch: RolloutBatch, cfg: AdvantageConfig, reward_source=RewardSource.SAMPLED,
                   schedule: Optional[WarmupSchedule] = None) -> Tuple[np.ndarray, np.ndarray]:
    """Generalized advantage estimates and value targets.

    delta_t = r~_t + gamma V(s_{t+1}) - V(s_t); the discounted sum of deltas
    restarts after every terminal or truncated step.
    """
    rewards = training_rewards(batch, reward_source, schedule)
    deltas = rewards + cfg.gamma * batch.next_values - batch.values
    advantages = np.zeros(len(batch))
    running = 0.0
    for t in range(len(batch) - 1, -1, -1):
        if batch.dones[t]:
            running = 0.0
        running = deltas[t] + cfg.gamma * cfg.lam * running
        advantages[t] = running
    return advantages, advantages + batch.values
