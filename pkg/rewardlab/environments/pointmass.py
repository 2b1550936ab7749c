from typing import Optional

import numpy as np

from ..errors import InvalidParameterError
from .base import ActionSpace, Environment, TransitionTuple

STEP_SCALE = 0.1


class PointMassEnv(Environment):
    """1-D point mass pushed by a bounded force.

    x' = x + 0.1 a with a clipped to [-1, 1]; reward = -x^2 - c a^2 on the
    departed position, so the reward depends on the action whenever c > 0.
    The state is ``[position, velocity]`` where velocity is the last displacement.
    """

    observation_size = 2
    action_space = ActionSpace("continuous", 1, -1.0, 1.0)

    def __init__(self, action_cost_coeff: float = 0.1, horizon: int = 50,
                 rng: Optional[np.random.Generator] = None):
        super().__init__(rng)
        if action_cost_coeff < 0:
            raise InvalidParameterError(f"action_cost_coeff must be nonnegative, got {action_cost_coeff}")
        if horizon < 1:
            raise InvalidParameterError(f"horizon must be positive, got {horizon}")
        self.action_cost_coeff = float(action_cost_coeff)
        self.horizon = int(horizon)
        self.reset()

    def reset(self, position: Optional[float] = None) -> np.ndarray:
        self.position = float(self.rng.uniform(-1.0, 1.0)) if position is None else float(position)
        self.velocity = 0.0
        self.t = 0
        self.done = False
        return self.observation()

    def observation(self) -> np.ndarray:
        return np.array([self.position, self.velocity])

    def reward(self, position: float, action: float) -> float:
        return -position ** 2 - self.action_cost_coeff * action ** 2

    def _advance(self, action, rng: np.random.Generator) -> TransitionTuple:
        raw = np.asarray(action, dtype=float).reshape(-1)
        force = float(np.clip(raw[0], -1.0, 1.0))
        state = self.observation()
        reward = self.reward(self.position, force)
        self.velocity = STEP_SCALE * force
        self.position += self.velocity
        self.t += 1
        return TransitionTuple(
            state=state,
            action=np.array([force]),
            next_state=self.observation(),
            reward_true=reward,
            reward_observed=reward,
            terminal=False,
            truncated=self.t >= self.horizon,
        )
