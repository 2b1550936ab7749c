"""Suite config files.

A suite is one flat file of dotted ``key=value`` lines (``#`` comments
allowed), read with python-dotenv. Example::

    suite.id=pointmass-uniform
    suite.seeds=0,1,2,3,4,5,6,7,8,9
    env.id=pointmass
    noise.kind=uniform
    noise.levels=0,0.1,0.3
    train.sources=sampled,estimated:sa
    output.path=results/pointmass_uniform.csv
"""

import hashlib
import os
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from dotenv import dotenv_values

from ..environments.presets import OVERRIDE_ALIASES, preset_settings
from ..errors import ConfigError, InvalidParameterError
from ..noise.channels import NoiseModel, parse_noise
from ..sources import FeatureMode, SourceSpec, parse_sources
from ..tabular.experiment import DEFAULT_ALPHAS
from ..utils.logger import get_logger
from .report_config import DEFAULT_RESULTS_NAME

logger = get_logger(__name__)

SUITE_KINDS = ("train", "tabular")

KNOWN_KEYS = {
    "suite.id", "suite.kind", "suite.seeds", "suite.workers",
    "env.id",
    "noise.sweep", "noise.kind", "noise.levels", "noise.sigma", "noise.epsilon", "noise.low", "noise.high",
    "train.algo", "train.sources", "train.updates", "train.n_envs", "train.rollout_length",
    "train.window", "train.reward_lr", "train.reward_steps",
    "tabular.alphas", "tabular.episodes", "tabular.key_mode",
    "output.path",
}

# Level lists for noise.kind; an empty tuple accepts any kind
NOISE_LEVEL_KEYS = {
    "noise.levels": (),
    "noise.sigma": ("gaussian",),
    "noise.epsilon": ("uniform", "sparse"),
}

# every other env.<name> key is a preset override checked against the preset itself
ENV_PREFIX = "env."


def canonical_text(values: Dict[str, str]) -> str:
    return "".join(f"{key}={values[key]}\n" for key in sorted(values))


def config_hash(values: Dict[str, str]) -> str:
    """SHA-256 of the sorted key=value lines; stable across re-serialization"""
    return hashlib.sha256(canonical_text(values).encode("utf-8")).hexdigest()


def _csv(text: str) -> List[str]:
    return [item.strip() for item in text.split(",") if item.strip()]


def _number(key: str, text: str, kind=float):
    try:
        return kind(text)
    except ValueError as e:
        raise ConfigError(f"'{key}' must be a {kind.__name__}, got '{text}'") from e


@dataclass
class SuiteConfig:
    suite_id: str
    kind: str = "train"
    seeds: Tuple[int, ...] = tuple(range(10))
    workers: Optional[int] = None
    env_id: str = "pointmass"
    env_overrides: Dict[str, Any] = field(default_factory=dict)
    noises: List[NoiseModel] = field(default_factory=lambda: [NoiseModel.identity()])
    algo: str = "clipped"
    sources: List[SourceSpec] = field(default_factory=list)
    updates: int = 400
    n_envs: int = 8
    rollout_length: int = 32
    window: int = 100
    reward_lr: Optional[float] = None
    reward_steps: int = 1
    tabular_alphas: Tuple[float, ...] = DEFAULT_ALPHAS
    tabular_episodes: int = 100
    tabular_key_mode: FeatureMode = FeatureMode.S
    output_path: str = DEFAULT_RESULTS_NAME
    checkpoint_dir: Optional[str] = None
    values: Dict[str, str] = field(default_factory=dict)

    @property
    def config_hash(self) -> str:
        return config_hash(self.values)

    @property
    def canonical_text(self) -> str:
        return canonical_text(self.values)

    @classmethod
    def from_values(cls, values: Dict[str, Optional[str]]) -> "SuiteConfig":
        """Validate raw key-value pairs; any problem raises a ConfigError"""
        cleaned: Dict[str, str] = {}
        for key, value in values.items():
            if value is None:
                raise ConfigError(f"Line for '{key}' has no '=' separator")
            if key not in KNOWN_KEYS and not key.startswith(ENV_PREFIX):
                raise ConfigError(f"Unknown config key '{key}'")
            cleaned[key] = value.strip()

        get = cleaned.get
        if "suite.id" not in cleaned:
            raise ConfigError("Config is missing 'suite.id'")
        kind = get("suite.kind", "train")
        if kind not in SUITE_KINDS:
            raise ConfigError(f"suite.kind must be one of {', '.join(SUITE_KINDS)}, got '{kind}'")

        seeds = tuple(_number("suite.seeds", s, int) for s in _csv(get("suite.seeds", "0,1,2,3,4,5,6,7,8,9")))
        if not seeds:
            raise ConfigError("suite.seeds is empty")
        if len(set(seeds)) != len(seeds):
            raise ConfigError(f"suite.seeds must be distinct, got {list(seeds)}")

        env_id = get("env.id", "chain5" if kind == "tabular" else "pointmass")
        overrides = {}
        for key, value in cleaned.items():
            if key.startswith(ENV_PREFIX) and key != "env.id":
                name = key[len(ENV_PREFIX):]
                overrides[OVERRIDE_ALIASES.get(name, name)] = _number(key, value)
        # preset errors (unknown id or setting) are ConfigErrors already
        settings = preset_settings(env_id, **overrides)
        for name in ("size", "max_steps", "horizon", "num_reward_steps"):
            if name in overrides:
                overrides[name] = int(overrides[name])
        if kind == "tabular" and settings["kind"] != "chain":
            raise ConfigError(f"tabular suites need a chain preset, got '{env_id}'")

        config = cls(suite_id=cleaned["suite.id"], kind=kind, seeds=seeds, env_id=env_id,
                     env_overrides=overrides, values=cleaned)
        config.noises = cls._parse_noises(cleaned)
        if "suite.workers" in cleaned:
            config.workers = _number("suite.workers", cleaned["suite.workers"], int)
        config.algo = get("train.algo", config.algo)
        try:
            sources = parse_sources(get("train.sources", "sampled,estimated:s"))
            config.tabular_key_mode = FeatureMode(get("tabular.key_mode", "s"))
        except (InvalidParameterError, ValueError) as e:
            raise ConfigError(str(e)) from e
        deduped = []
        for spec in sources:
            if spec in deduped:
                logger.info("source %s listed twice in %s; running it once", spec.label(), config.suite_id)
                continue
            deduped.append(spec)
        config.sources = deduped
        for key, attr, kind_ in (
            ("train.updates", "updates", int),
            ("train.n_envs", "n_envs", int),
            ("train.rollout_length", "rollout_length", int),
            ("train.window", "window", int),
            ("train.reward_lr", "reward_lr", float),
            ("train.reward_steps", "reward_steps", int),
            ("tabular.episodes", "tabular_episodes", int),
        ):
            if key in cleaned:
                setattr(config, attr, _number(key, cleaned[key], kind_))
        if "tabular.alphas" in cleaned:
            config.tabular_alphas = tuple(_number("tabular.alphas", a) for a in _csv(cleaned["tabular.alphas"]))
        config.output_path = get("output.path", os.path.join(os.environ.get("LAB_OUTPUT_DIR", "results"),
                                                             f"{config.suite_id}.csv"))
        return config

    @staticmethod
    def _parse_noises(cleaned: Dict[str, str]) -> List[NoiseModel]:
        low = _number("noise.low", cleaned.get("noise.low", "-1"))
        high = _number("noise.high", cleaned.get("noise.high", "1"))
        level_keys = [key for key in NOISE_LEVEL_KEYS if key in cleaned]
        try:
            if "noise.sweep" in cleaned:
                if "noise.kind" in cleaned or level_keys:
                    raise ConfigError("use either noise.sweep or noise.kind + its levels, not both")
                return [parse_noise(item, low, high) for item in _csv(cleaned["noise.sweep"])]
            if len(level_keys) > 1:
                raise ConfigError(f"give only one of {', '.join(level_keys)}")
            kind = cleaned.get("noise.kind", "gaussian" if "noise.sigma" in cleaned else None)
            if kind is None:
                if level_keys:
                    raise ConfigError(f"'{level_keys[0]}' needs noise.kind")
                return [NoiseModel.identity()]
            if level_keys:
                key = level_keys[0]
                if NOISE_LEVEL_KEYS[key] and kind not in NOISE_LEVEL_KEYS[key]:
                    raise ConfigError(f"'{key}' does not apply to noise.kind={kind}")
                levels = _csv(cleaned[key])
            else:
                levels = ["0"]
            if kind == "none":
                return [NoiseModel.identity()]
            return [parse_noise(f"{kind}:{level}", low, high) for level in levels]
        except InvalidParameterError as e:
            raise ConfigError(str(e)) from e


def load_suite_config(path: str) -> SuiteConfig:
    if not os.path.isfile(path):
        raise ConfigError(f"Suite config not found: {path}")
    values = dotenv_values(path, interpolate=False)
    if not values:
        raise ConfigError(f"Suite config {path} has no key=value lines")
    return SuiteConfig.from_values(dict(values))
