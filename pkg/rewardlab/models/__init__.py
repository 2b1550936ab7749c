from .reward_statistics import STATISTICS_COLUMNS, RewardStatistics
from .run_record import RECORD_COLUMNS, RunRecord

__all__ = ["RECORD_COLUMNS", "RewardStatistics", "RunRecord", "STATISTICS_COLUMNS"]
