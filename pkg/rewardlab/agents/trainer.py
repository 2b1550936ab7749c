import os
import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..environments.presets import make_env, preset_settings
from ..errors import InvalidParameterError, NonFiniteError
from ..models.run_record import RunRecord
from ..nn.features import FeatureBuilder
from ..nn.mlp import MlpParams, forward, init_mlp
from ..nn.optimizer import Adam
from ..nn.reward_model import RewardRegressor
from ..nn.serialization import save_params
from ..noise.channels import NoiseModel
from ..noise.wrapper import NoisyEnvironment
from ..sources import RewardSource, SourceSpec
from ..utils.file_utils import setup_output_folder
from ..utils.logger import get_logger
from ..utils.seeding import derive_seeds
from .losses import a2c_actor_loss, clipped_surrogate_loss, critic_loss
from .policies import make_policy
from .rollout import AdvantageConfig, RolloutBatch, WarmupSchedule, gae_advantages

logger = get_logger(__name__)

ALGORITHMS = ("a2c", "clipped")
ALGORITHM_ALIASES = {"ppo": "clipped", "clippedpg": "clipped"}

# reward-estimator learning rates per environment kind
DEFAULT_REWARD_LR = {"grid": 1e-4, "pointmass": 3e-4, "chain": 1e-4}


@dataclass
class TrainConfig:
    env_id: str = "pointmass"
    env_overrides: Dict[str, Any] = field(default_factory=dict)
    noise: NoiseModel = field(default_factory=NoiseModel.identity)
    algo: str = "clipped"
    source: SourceSpec = field(default_factory=lambda: SourceSpec(RewardSource.SAMPLED))
    updates: int = 400
    n_envs: int = 8
    rollout_length: int = 32
    gamma: float = 0.99
    gae_lambda: float = 0.95
    clip_epsilon: float = 0.2
    entropy_coef: float = 0.01
    policy_lr: float = 3e-4
    value_lr: float = 1e-3
    reward_lr: Optional[float] = None
    reward_steps: int = 1
    epochs: Optional[int] = None
    warmup_fraction: float = 0.2
    window: int = 100
    hidden_sizes: Tuple[int, ...] = (64, 64)
    max_grad_norm: float = 0.5
    normalize_advantages: Optional[bool] = None
    seed: int = 0
    cell_index: int = 0
    checkpoint_dir: Optional[str] = None

    def __post_init__(self):
        self.algo = ALGORITHM_ALIASES.get(self.algo.lower(), self.algo.lower())
        if self.algo not in ALGORITHMS:
            raise InvalidParameterError(f"Unknown algorithm '{self.algo}' (use a2c or clipped)")
        if self.updates < 1 or self.n_envs < 1 or self.rollout_length < 1:
            raise InvalidParameterError("updates, n_envs and rollout_length must be positive")
        if self.source.estimated and self.source.feature_mode is None:
            raise InvalidParameterError("estimated reward source needs a feature mode")
        if self.reward_steps < 1:
            raise InvalidParameterError(f"reward_steps must be positive, got {self.reward_steps}")
        preset_settings(self.env_id, **self.env_overrides)

    @property
    def resolved_epochs(self) -> int:
        if self.epochs is not None:
            return int(self.epochs)
        return 4 if self.algo == "clipped" else 1

    @property
    def resolved_normalize(self) -> bool:
        if self.normalize_advantages is not None:
            return bool(self.normalize_advantages)
        return self.algo == "clipped"

    @property
    def resolved_reward_lr(self) -> float:
        if self.reward_lr is not None:
            return float(self.reward_lr)
        kind = preset_settings(self.env_id)["kind"]
        return DEFAULT_REWARD_LR[kind]


@dataclass
class TrainResult:
    records: List[RunRecord]
    policy: Any
    critic: MlpParams
    regressor: Optional[RewardRegressor]
    episode_returns: List[float]
    diverged: bool = False

    @property
    def final(self) -> RunRecord:
        return self.records[-1]


class ActorCriticTrainer:
    """On-policy actor-critic loop where the critic and advantages use either
    the observed reward or a learned reward estimate.

    Every update collects ``rollout_length`` steps from ``n_envs`` environment
    copies, computes GAE with the chosen reward source, takes policy and
    critic steps, and then takes regression steps for R-hat on the observed
    rewards of the same batch.
    """

    def __init__(self, config: TrainConfig):
        self.config = config
        seeds = derive_seeds(config.seed, config.cell_index)
        self.envs = [
            NoisyEnvironment(
                make_env(config.env_id, np.random.default_rng([seeds.env, k]), **config.env_overrides),
                config.noise,
                np.random.default_rng([seeds.noise, k]),
            )
            for k in range(config.n_envs)
        ]
        probe = self.envs[0]
        self.action_space = probe.action_space
        init_rng = np.random.default_rng([seeds.init, 0])
        self.action_rng = np.random.default_rng([seeds.init, 1])
        self.policy = make_policy(probe.observation_size, self.action_space, init_rng, config.hidden_sizes)
        self.critic = init_mlp((probe.observation_size, *config.hidden_sizes, 1), init_rng, 1.0, 1.0)
        self.policy_optimizer = Adam(lr=config.policy_lr, max_grad_norm=config.max_grad_norm)
        self.critic_optimizer = Adam(lr=config.value_lr, max_grad_norm=config.max_grad_norm)
        self.regressor = None
        if config.source.estimated:
            features = FeatureBuilder.for_env(config.source.feature_mode, probe)
            self.regressor = RewardRegressor(features, np.random.default_rng([seeds.init, 2]),
                                             config.resolved_reward_lr, config.hidden_sizes,
                                             config.max_grad_norm)
        self.schedule = WarmupSchedule.for_budget(config.updates, config.warmup_fraction)
        self.advantage_config = AdvantageConfig(config.gamma, config.gae_lambda, config.clip_epsilon)
        self.states = [env.reset() for env in self.envs]
        self.running_returns = np.zeros(config.n_envs)
        self.completed_returns: List[float] = []

    def collect(self):
        """Step every environment copy ``rollout_length`` times"""
        cfg = self.config
        transitions = [[] for _ in self.envs]
        raw_actions = [[] for _ in self.envs]
        log_probs = [[] for _ in self.envs]
        for _ in range(cfg.rollout_length):
            observations = np.stack([env.encode(state) for env, state in zip(self.envs, self.states)])
            actions, action_log_probs = self.policy.act_batch(observations, self.action_rng)
            for k, env in enumerate(self.envs):
                transition = env.step(self.policy.env_action(actions[k]))
                transitions[k].append(transition)
                raw_actions[k].append(actions[k])
                log_probs[k].append(action_log_probs[k])
                self.running_returns[k] += transition.reward_true
                if transition.done:
                    self.completed_returns.append(float(self.running_returns[k]))
                    self.running_returns[k] = 0.0
                    self.states[k] = env.reset()
                else:
                    self.states[k] = transition.next_state
        return transitions, raw_actions, log_probs

    def update(self) -> Dict[str, float]:
        cfg = self.config
        transitions, raw_actions, log_probs = self.collect()
        encode = self.envs[0].encode
        flat = [t for per_env in transitions for t in per_env]
        observations = np.array([encode(t.state) for t in flat])
        next_observations = np.array([encode(t.next_state) for t in flat])
        actions = np.array([a for per_env in raw_actions for a in per_env])
        old_log_probs = np.array([lp for per_env in log_probs for lp in per_env])
        values = forward(self.critic, observations)[:, 0]
        next_values = forward(self.critic, next_observations)[:, 0]

        reward_features = reward_targets = None
        predictions = None
        if self.regressor is not None:
            encoded_actions = np.array([self.action_space.encode(t.action) for t in flat])
            reward_features = self.regressor.features.from_arrays(observations, encoded_actions, next_observations)
            reward_targets = np.array([t.reward_observed for t in flat])
            predictions = self.regressor.predict_features(reward_features)

        weight = self.schedule.weight()
        advantages, targets = [], []
        steps = cfg.rollout_length
        for k in range(len(self.envs)):
            window = slice(k * steps, (k + 1) * steps)
            batch = RolloutBatch(
                transitions[k],
                values[window],
                next_values[window],
                None if predictions is None else predictions[window],
                old_log_probs[window],
            )
            adv, tgt = gae_advantages(batch, self.advantage_config, cfg.source.source, self.schedule)
            advantages.append(adv)
            targets.append(tgt)
        advantages = np.concatenate(advantages)
        targets = np.concatenate(targets)

        policy_advantages = advantages
        if cfg.resolved_normalize and advantages.size > 1:
            policy_advantages = (advantages - advantages.mean()) / (advantages.std() + 1e-8)

        for _ in range(cfg.resolved_epochs):
            if cfg.algo == "a2c":
                _, g = a2c_actor_loss(self.policy, self.policy.theta, observations, actions,
                                      policy_advantages, cfg.entropy_coef)
            else:
                _, g = clipped_surrogate_loss(self.policy, self.policy.theta, old_log_probs, observations,
                                              actions, policy_advantages, cfg.clip_epsilon, cfg.entropy_coef)
            self.policy.theta = self.policy_optimizer.step(self.policy.theta, g)
            _, g = critic_loss(self.critic, observations, targets)
            self.critic.theta = self.critic_optimizer.step(self.critic.theta, g)

        reward_loss = float("nan")
        if self.regressor is not None:
            for _ in range(cfg.reward_steps):
                loss = self.regressor.fit_step(reward_features, reward_targets)
                if np.isnan(reward_loss):
                    reward_loss = loss
        self.schedule.advance()
        return {
            "mean_abs_advantage": float(np.mean(np.abs(advantages))),
            "mean_sq_advantage": float(np.mean(advantages ** 2)),
            "reward_loss": reward_loss,
            "warmup_weight": weight if cfg.source.estimated else 0.0,
        }

    def parameters_finite(self) -> bool:
        arrays = [self.policy.theta, self.critic.theta]
        if self.regressor is not None:
            arrays.append(self.regressor.params.theta)
        return all(np.all(np.isfinite(a)) for a in arrays)

    def trailing_return(self) -> Tuple[float, int, bool]:
        window = self.completed_returns[-self.config.window:]
        if not window:
            return float("nan"), 0, True
        return float(np.mean(window)), len(self.completed_returns), len(window) < self.config.window

    def run(self) -> TrainResult:
        cfg = self.config
        start_time = time.time()
        records: List[RunRecord] = []
        diverged = False
        for u in range(cfg.updates):
            try:
                stats = self.update()
                diverged = not self.parameters_finite()
            except NonFiniteError as e:
                logger.warning("run diverged at update %d (layer %d): %s", u, e.layer_index, e.message)
                stats = {}
                diverged = True
            mean_return, episodes, short = self.trailing_return()
            records.append(RunRecord(
                cell=cfg.cell_index,
                env=cfg.env_id,
                noise=cfg.noise.label(),
                source=cfg.source.label(),
                algo=cfg.algo,
                seed=cfg.seed,
                update=u + 1,
                mean_return=mean_return,
                episodes=episodes,
                short_window=short,
                diverged=diverged,
                **stats,
            ))
            if diverged:
                logger.warning("aborting %s/%s seed %d after divergence", cfg.env_id, cfg.source.label(), cfg.seed)
                break
        logger.info("training %s %s seed %d finished in %.2fs", cfg.env_id, cfg.source.label(), cfg.seed,
                    time.time() - start_time)
        if cfg.checkpoint_dir and not diverged:
            self.save_checkpoint(cfg.checkpoint_dir)
        return TrainResult(records, self.policy, self.critic, self.regressor, list(self.completed_returns), diverged)

    def save_checkpoint(self, folder: str) -> List[str]:
        cfg = self.config
        folder = setup_output_folder(folder)
        stem = f"{cfg.env_id}_{cfg.source.label().replace(':', '-')}_{cfg.noise.label().replace(':', '-')}_seed{cfg.seed}"
        paths = [
            save_params(os.path.join(folder, f"{stem}_policy.nrlb"), self.policy.sizes, self.policy.theta),
            save_params(os.path.join(folder, f"{stem}_critic.nrlb"), self.critic.sizes, self.critic.theta),
        ]
        if self.regressor is not None:
            paths.append(save_params(os.path.join(folder, f"{stem}_reward.nrlb"),
                                     self.regressor.params.sizes, self.regressor.params.theta))
        return paths


def train_agent(config: TrainConfig) -> TrainResult:
    return ActorCriticTrainer(config).run()


def final_returns(results: Sequence[TrainResult]) -> np.ndarray:
    return np.array([r.final.mean_return for r in results])
