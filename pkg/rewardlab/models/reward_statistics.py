from dataclasses import asdict, dataclass, fields
from typing import Any, Dict

NAN = float("nan")


@dataclass
class RewardStatistics:
    """Reward variance and error statistics of one measurement trial"""

    env: str = ""
    noise: str = "none"
    level: float = 0.0
    trial: int = 0
    transitions: int = 0
    var_r_true: float = NAN
    var_r_corr: float = NAN
    var_r_hat: float = NAN
    mse_corr_vs_true: float = NAN
    mse_r_hat_vs_true: float = NAN
    fallback_events: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RewardStatistics":
        known = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in data.items() if k in known})


STATISTICS_COLUMNS = [f.name for f in fields(RewardStatistics)]
