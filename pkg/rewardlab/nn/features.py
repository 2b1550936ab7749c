from typing import Callable, Sequence

import numpy as np

from ..environments.base import ActionSpace, TransitionTuple
from ..sources import FeatureMode


class FeatureBuilder:
    """Turns transitions into reward-estimator inputs for a feature mode.

    Discrete actions are one-hot encoded; continuous actions are used as-is.
    """

    def __init__(self, mode: FeatureMode, state_size: int, action_space: ActionSpace,
                 encode_state: Callable = None):
        self.mode = FeatureMode(mode)
        self.state_size = int(state_size)
        self.action_space = action_space
        self.encode_state = encode_state or (lambda s: np.asarray(s, dtype=float).reshape(-1))

    @classmethod
    def for_env(cls, mode: FeatureMode, env) -> "FeatureBuilder":
        return cls(mode, env.observation_size, env.action_space, env.encode)

    @property
    def input_size(self) -> int:
        return self.mode.input_size(self.state_size, self.action_space.feature_size)

    def from_arrays(self, states: np.ndarray, actions: np.ndarray, next_states: np.ndarray) -> np.ndarray:
        """Features from already-encoded state rows and encoded action rows"""
        blocks = [np.asarray(states, dtype=float)]
        if self.mode in (FeatureMode.SA, FeatureMode.SAS):
            blocks.append(np.asarray(actions, dtype=float))
        if self.mode is FeatureMode.SAS:
            blocks.append(np.asarray(next_states, dtype=float))
        return np.concatenate(blocks, axis=1)

    def transform(self, transitions: Sequence[TransitionTuple]) -> np.ndarray:
        states = np.array([self.encode_state(t.state) for t in transitions])
        actions = np.array([self.action_space.encode(t.action) for t in transitions])
        next_states = np.array([self.encode_state(t.next_state) for t in transitions])
        return self.from_arrays(states, actions, next_states)
