from typing import Optional

import numpy as np

from ..errors import InvalidParameterError
from .base import ActionSpace, Environment, TransitionTuple, one_hot

# up, down, left, right as (row, col) offsets
MOVES = ((-1, 0), (1, 0), (0, -1), (0, 1))


class GridWorldEnv(Environment):
    """Square gridworld: start top-left, goal bottom-right.

    Reaching the goal pays ``goal_reward`` and ends the episode; otherwise the
    episode is cut (truncated, not terminal) after ``max_steps`` moves.
    States are cell indices ``row * size + col``.
    """

    action_space = ActionSpace("discrete", 4)

    def __init__(self, size: int = 5, max_steps: int = 50, goal_reward: float = 1.0,
                 rng: Optional[np.random.Generator] = None):
        super().__init__(rng)
        if size < 2:
            raise InvalidParameterError(f"grid size must be at least 2, got {size}")
        if max_steps < 1:
            raise InvalidParameterError(f"max_steps must be positive, got {max_steps}")
        self.size = int(size)
        self.max_steps = int(max_steps)
        self.goal_reward = float(goal_reward)
        self.goal = self.size * self.size - 1
        self.observation_size = self.size * self.size
        self.reset()

    def reset(self) -> int:
        self.state = 0
        self.t = 0
        self.done = False
        return self.state

    def _advance(self, action, rng: np.random.Generator) -> TransitionTuple:
        row, col = divmod(self.state, self.size)
        d_row, d_col = MOVES[int(action)]
        row = min(max(row + d_row, 0), self.size - 1)
        col = min(max(col + d_col, 0), self.size - 1)
        state = self.state
        self.state = row * self.size + col
        self.t += 1
        at_goal = self.state == self.goal
        reward = self.goal_reward if at_goal else 0.0
        return TransitionTuple(
            state=state,
            action=int(action),
            next_state=self.state,
            reward_true=reward,
            reward_observed=reward,
            terminal=at_goal,
            truncated=not at_goal and self.t >= self.max_steps,
        )

    def encode(self, state) -> np.ndarray:
        return one_hot(state, self.observation_size)
