from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Optional

import numpy as np

from ..errors import TerminalStepError


@dataclass(frozen=True)
class TransitionTuple:
    """One environment step.

    ``reward_true`` is kept for diagnostics and evaluation only; learners read
    ``reward_observed``.
    """

    state: Any
    action: Any
    next_state: Any
    reward_true: float
    reward_observed: float
    terminal: bool
    truncated: bool = False

    @property
    def done(self) -> bool:
        return self.terminal or self.truncated


@dataclass(frozen=True)
class ActionSpace:
    kind: str  # "discrete" or "continuous"
    n: int  # number of actions (discrete) or action dimension (continuous)
    low: float = -1.0
    high: float = 1.0

    @property
    def is_discrete(self) -> bool:
        return self.kind == "discrete"

    @property
    def feature_size(self) -> int:
        """Width of the action block in estimator features (one-hot for discrete)"""
        return self.n

    def sample(self, rng: np.random.Generator):
        if self.is_discrete:
            return int(rng.integers(self.n))
        return rng.uniform(self.low, self.high, size=self.n)

    def encode(self, action) -> np.ndarray:
        if self.is_discrete:
            out = np.zeros(self.n)
            out[int(action)] = 1.0
            return out
        return np.asarray(action, dtype=float).reshape(self.n)


class Environment(ABC):
    """Single-threaded episodic environment that owns its RNG stream.

    ``step`` may be handed a different generator, which is then used for that
    step only.
    """

    observation_size: int = 1
    action_space: ActionSpace = ActionSpace("discrete", 1)

    def __init__(self, rng: Optional[np.random.Generator] = None):
        self.rng = rng if rng is not None else np.random.default_rng()
        self.done = True

    @abstractmethod
    def reset(self):
        """Start a new episode and return the initial state"""

    @abstractmethod
    def _advance(self, action, rng: np.random.Generator) -> TransitionTuple:
        """Apply ``action`` to the live episode"""

    def step(self, action, rng: Optional[np.random.Generator] = None) -> TransitionTuple:
        if self.done:
            raise TerminalStepError(f"{type(self).__name__} stepped after the episode ended; call reset()")
        transition = self._advance(action, rng if rng is not None else self.rng)
        self.done = transition.done
        return transition

    def encode(self, state) -> np.ndarray:
        """Observation vector fed to networks"""
        return np.asarray(state, dtype=float).reshape(self.observation_size)

    def sample_action(self, rng: Optional[np.random.Generator] = None):
        return self.action_space.sample(rng if rng is not None else self.rng)


def step(env: Environment, action, rng: Optional[np.random.Generator] = None) -> TransitionTuple:
    return env.step(action, rng)


def one_hot(index: int, size: int) -> np.ndarray:
    out = np.zeros(size)
    out[int(index)] = 1.0
    return out
