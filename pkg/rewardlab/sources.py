"""Reward sources and estimator feature modes shared by the tabular and network learners."""

from dataclasses import dataclass
from enum import Enum
from typing import List, Optional

from .errors import InvalidParameterError


class FeatureMode(str, Enum):
    """Which parts of a transition the reward estimator conditions on"""

    S = "s"
    SA = "sa"
    SAS = "sas"

    def input_size(self, state_size: int, action_size: int) -> int:
        if self is FeatureMode.S:
            return state_size
        if self is FeatureMode.SA:
            return state_size + action_size
        return 2 * state_size + action_size


class RewardSource(str, Enum):
    SAMPLED = "sampled"
    ESTIMATED = "estimated"


@dataclass(frozen=True)
class SourceSpec:
    source: RewardSource
    feature_mode: Optional[FeatureMode] = None

    @property
    def estimated(self) -> bool:
        return self.source is RewardSource.ESTIMATED

    def label(self) -> str:
        if self.estimated:
            return f"estimated:{self.feature_mode.value}"
        return "sampled"


def parse_source(text: str, default_mode: FeatureMode = FeatureMode.S) -> SourceSpec:
    """``sampled``, ``estimated``, ``estimator`` or ``estimated:<s|sa|sas>``"""
    parts = [p.strip().lower() for p in text.split(":")]
    name = parts[0]
    if name == "sampled" and len(parts) == 1:
        return SourceSpec(RewardSource.SAMPLED)
    if name in ("estimated", "estimator") and len(parts) <= 2:
        try:
            mode = FeatureMode(parts[1]) if len(parts) == 2 else default_mode
        except ValueError as e:
            raise InvalidParameterError(f"Unknown feature mode in reward source '{text}'") from e
        return SourceSpec(RewardSource.ESTIMATED, mode)
    raise InvalidParameterError(f"Unknown reward source '{text}' (use sampled or estimated:s|sa|sas)")


def parse_sources(text: str, default_mode: FeatureMode = FeatureMode.S) -> List[SourceSpec]:
    return [parse_source(item, default_mode) for item in text.split(",") if item.strip()]
