import os
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import pandas as pd

from ..agents.trainer import TrainConfig, train_agent
from ..environments.presets import discount_for
from ..errors import DivergenceError
from ..models.run_record import RunRecord
from ..tabular.experiment import run_tabular_experiment, summarize_tabular
from ..utils.file_utils import summary_path_for
from ..utils.logger import get_logger
from ..utils.report_utils import format_timestamp
from .config import SuiteConfig, load_suite_config
from .data_processor import RunRecordProcessor
from .report_generator import ReportGenerator
from .scoring import random_policy_baseline

logger = get_logger(__name__)

DEFAULT_WORKERS = 4


def resolve_workers(config: SuiteConfig, workers: Optional[int] = None) -> int:
    if workers is None:
        workers = config.workers
    if workers is None:
        workers = int(os.environ.get("LAB_WORKERS", DEFAULT_WORKERS))
    return max(1, int(workers))


@dataclass
class SuiteResult:
    config: SuiteConfig
    results: pd.DataFrame
    summary: pd.DataFrame
    paths: List[str] = field(default_factory=list)


def run_train_suite(config: SuiteConfig, workers: int) -> SuiteResult:
    jobs = [
        (cell_index, noise, source, seed)
        for cell_index, noise in enumerate(config.noises)
        for source in config.sources
        for seed in config.seeds
    ]
    random_return = random_policy_baseline(config.env_id, seed=0, **config.env_overrides)
    gamma = discount_for(config.env_id, **config.env_overrides)
    suite_hash = config.config_hash

    records: List[RunRecord] = []
    diverged: Dict[Tuple[int, str], List[bool]] = {}
    sink_lock = threading.Lock()

    def run_job(cell_index, noise, source, seed) -> None:
        train_config = TrainConfig(
            env_id=config.env_id,
            env_overrides=config.env_overrides,
            noise=noise,
            algo=config.algo,
            source=source,
            updates=config.updates,
            n_envs=config.n_envs,
            rollout_length=config.rollout_length,
            gamma=gamma,
            window=config.window,
            reward_lr=config.reward_lr,
            reward_steps=config.reward_steps,
            seed=seed,
            cell_index=cell_index,
            checkpoint_dir=config.checkpoint_dir,
        )
        result = train_agent(train_config)
        stamp = format_timestamp()
        for record in result.records:
            record.suite_id = config.suite_id
            record.config_hash = suite_hash
            record.random_return = random_return
            record.timestamp = stamp
        with sink_lock:
            records.extend(result.records)
            diverged.setdefault((cell_index, source.label()), []).append(result.diverged)

    print(f"Running suite '{config.suite_id}': {len(config.noises)} noise levels x "
          f"{len(config.sources)} sources x {len(config.seeds)} seeds on {config.env_id} ({workers} workers)")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for future in [pool.submit(run_job, *job) for job in jobs]:
            future.result()

    report = ReportGenerator(config.output_path)
    paths = report.generate_report(records)
    frame = report.records_frame(records)
    summary = RunRecordProcessor.summarize(frame)

    failed = [key for key, flags in sorted(diverged.items()) if all(flags)]
    if failed:
        cells = ", ".join(f"{config.noises[c].label()}/{s}" for c, s in failed)
        raise DivergenceError(f"every seed diverged in: {cells} (results kept in {config.output_path})")
    return SuiteResult(config, frame, summary, paths)


def run_tabular_suite(config: SuiteConfig, workers: int) -> SuiteResult:
    overrides = config.env_overrides
    frames, summaries = [], []
    for noise in config.noises:
        frame = run_tabular_experiment(
            config.env_id,
            reward_value=overrides.get("reward_value"),
            reward_prob=overrides.get("reward_prob"),
            noise=noise,
            alphas=config.tabular_alphas,
            episodes=config.tabular_episodes,
            seeds=config.seeds,
            key_mode=config.tabular_key_mode,
            gamma=overrides.get("gamma"),
            workers=workers,
        )
        frame.insert(0, "noise", noise.label())
        frames.append(frame)
        summary = summarize_tabular(frame)
        summary.insert(0, "noise", noise.label())
        summaries.append(summary)
    results = pd.concat(frames, ignore_index=True)
    results.insert(0, "config_hash", config.config_hash)
    results.insert(0, "suite_id", config.suite_id)
    results["timestamp"] = format_timestamp()
    summary = pd.concat(summaries, ignore_index=True)
    paths = [
        ReportGenerator.write_frame(results, config.output_path),
        ReportGenerator.write_frame(summary, summary_path_for(config.output_path)),
    ]
    print(f"Results saved to {config.output_path}")
    return SuiteResult(config, results, summary, paths)


def run_suite(path: str, workers: Optional[int] = None, output_path: Optional[str] = None) -> SuiteResult:
    """Run every (noise level, source, seed) cell of a suite config and write its CSV files"""
    config = load_suite_config(path)
    if output_path:
        config.output_path = output_path
    workers = resolve_workers(config, workers)
    start_time = time.time()
    logger.info("suite %s (config %s)", config.suite_id, config.config_hash[:12])
    if config.kind == "tabular":
        result = run_tabular_suite(config, workers)
    else:
        result = run_train_suite(config, workers)
    print(f"Suite '{config.suite_id}' completed in {time.time() - start_time:.2f} seconds")
    return result
