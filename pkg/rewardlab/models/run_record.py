from dataclasses import asdict, dataclass, fields
from typing import Any, Dict

import pandas as pd

NAN = float("nan")


@dataclass
class RunRecord:
    """One learning-curve checkpoint of a seeded run"""

    suite_id: str = ""
    config_hash: str = ""
    cell: int = 0
    env: str = ""
    noise: str = "none"
    source: str = "sampled"
    algo: str = ""
    seed: int = 0
    update: int = 0
    mean_return: float = NAN
    episodes: int = 0
    short_window: bool = False
    mean_abs_advantage: float = NAN
    mean_sq_advantage: float = NAN
    reward_loss: float = NAN
    warmup_weight: float = NAN
    rmse: float = NAN
    random_return: float = NAN
    diverged: bool = False
    timestamp: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunRecord":
        known = {f.name: f for f in fields(cls)}
        values = {}
        for name, f in known.items():
            if name not in data:
                continue
            value = data[name]
            if f.type is bool or f.type == "bool":
                value = str(value).strip().lower() in ("true", "1")
            elif f.type is int or f.type == "int":
                value = int(value)
            elif f.type is float or f.type == "float":
                value = NAN if value is None or value == "" else float(value)
            else:
                value = "" if value is None or pd.isna(value) else str(value)
            values[name] = value
        return cls(**values)


RECORD_COLUMNS = [f.name for f in fields(RunRecord)]
