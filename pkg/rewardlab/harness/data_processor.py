import numpy as np
import pandas as pd

from ..errors import UndefinedScoreError
from ..utils.logger import get_logger
from .report_config import BASELINE_SOURCE, GROUP_COLUMNS, SORT_COLUMNS, SUMMARY_COLUMNS
from .scoring import normalized_improvement

logger = get_logger(__name__)


class RunRecordProcessor:
    """Aggregates raw learning-curve records into the suite summary"""

    @staticmethod
    def sort_records(frame: pd.DataFrame) -> pd.DataFrame:
        """Stable order independent of which worker finished first"""
        keys = [c for c in SORT_COLUMNS if c in frame.columns]
        return frame.sort_values(keys, kind="mergesort").reset_index(drop=True)

    @staticmethod
    def final_checkpoints(frame: pd.DataFrame) -> pd.DataFrame:
        """Last recorded checkpoint of every (suite, env, algo, noise, source, seed) run"""
        run_columns = GROUP_COLUMNS + ["seed"]
        order = run_columns + [c for c in ("update", "cell") if c in frame.columns]
        ordered = frame.sort_values(order, kind="mergesort")
        return ordered.groupby(run_columns, sort=True, dropna=False).tail(1).reset_index(drop=True)

    @staticmethod
    def seed_means(frame: pd.DataFrame) -> pd.DataFrame:
        """Seed-mean trailing return per cell and source; diverged seeds are counted but not averaged"""
        final = RunRecordProcessor.final_checkpoints(frame)
        final = final.assign(diverged=final["diverged"].astype(str).str.lower().isin(["true", "1"]))
        rows = []
        for key, group in final.groupby(GROUP_COLUMNS, sort=True):
            healthy = group.loc[~group["diverged"], "mean_return"].astype(float)
            rows.append({
                **dict(zip(GROUP_COLUMNS, key)),
                "seeds": int(len(group)),
                "diverged_seeds": int(group["diverged"].sum()),
                "mean_return": float(healthy.mean()) if len(healthy) else np.nan,
                "std_return": float(healthy.std(ddof=1)) if len(healthy) > 1 else np.nan,
                "random_return": float(group["random_return"].astype(float).mean()),
            })
        return pd.DataFrame(rows)

    @staticmethod
    def summarize(frame: pd.DataFrame) -> pd.DataFrame:
        """Seed means plus normalized improvement over the sampled-reward baseline of the same cell"""
        means = RunRecordProcessor.seed_means(frame)
        if means.empty:
            return pd.DataFrame(columns=SUMMARY_COLUMNS)
        cell_columns = [c for c in GROUP_COLUMNS if c != "source"]
        baseline = {
            tuple(row[c] for c in cell_columns): row["mean_return"]
            for _, row in means[means["source"] == BASELINE_SOURCE].iterrows()
        }
        scores, bests = [], []
        for _, row in means.iterrows():
            key = tuple(row[c] for c in cell_columns)
            best = baseline.get(key, np.nan)
            bests.append(best)
            try:
                score = normalized_improvement(row["mean_return"], best, row["random_return"])
            except UndefinedScoreError as e:
                logger.warning("%s / %s: %s", row["noise"], row["source"], e.message)
                score = np.nan
            scores.append(score)
        means["best_baseline"] = bests
        means["normalized_improvement"] = scores
        return means[SUMMARY_COLUMNS]

    @staticmethod
    def improvement_matrix(summary: pd.DataFrame) -> pd.DataFrame:
        """Noise level x source table of normalized improvement"""
        return summary.pivot_table(index="noise", columns="source", values="normalized_improvement",
                                   aggfunc="mean", sort=False)
