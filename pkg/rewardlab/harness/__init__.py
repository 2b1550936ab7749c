from .config import SuiteConfig, canonical_text, config_hash, load_suite_config
from .data_processor import RunRecordProcessor
from .report_generator import ReportGenerator, load_results, rescore
from .scoring import normalized_improvement, random_policy_baseline
from .suite import SuiteResult, run_suite

__all__ = [
    "ReportGenerator",
    "RunRecordProcessor",
    "SuiteConfig",
    "SuiteResult",
    "canonical_text",
    "config_hash",
    "load_results",
    "load_suite_config",
    "normalized_improvement",
    "random_policy_baseline",
    "rescore",
    "run_suite",
]
