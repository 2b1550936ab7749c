from .losses import a2c_actor_loss, clipped_objective, clipped_surrogate_loss, critic_loss
from .policies import CategoricalPolicy, GaussianPolicy, UniformRandomPolicy, make_policy, policy_from_params
from .rollout import (AdvantageConfig, RolloutBatch, WarmupSchedule, effective_reward, gae_advantages,
                      training_rewards)
from .trainer import ActorCriticTrainer, TrainConfig, TrainResult, final_returns, train_agent

__all__ = [
    "ActorCriticTrainer",
    "AdvantageConfig",
    "CategoricalPolicy",
    "GaussianPolicy",
    "RolloutBatch",
    "TrainConfig",
    "TrainResult",
    "UniformRandomPolicy",
    "WarmupSchedule",
    "a2c_actor_loss",
    "clipped_objective",
    "clipped_surrogate_loss",
    "critic_loss",
    "effective_reward",
    "final_returns",
    "gae_advantages",
    "make_policy",
    "policy_from_params",
    "train_agent",
    "training_rewards",
]
