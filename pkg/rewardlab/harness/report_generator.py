import time
from typing import List, Sequence

import pandas as pd

from ..errors import OutputWriteError
from ..models.run_record import RECORD_COLUMNS, RunRecord
from ..utils.file_utils import ensure_parent_folder, summary_path_for
from .data_processor import RunRecordProcessor


class ReportGenerator:
    """
    Writes suite results as CSV files.

    The raw file holds one RunRecord checkpoint per line; the summary file
    next to it is derived from the raw rows only.
    """

    def __init__(self, results_path: str):
        self.results_path = results_path
        self.summary_path = summary_path_for(results_path)

    @staticmethod
    def records_frame(records: Sequence[RunRecord]) -> pd.DataFrame:
        frame = pd.DataFrame([r.to_dict() for r in records], columns=RECORD_COLUMNS)
        return RunRecordProcessor.sort_records(frame)

    def generate_report(self, records: Sequence[RunRecord]) -> List[str]:
        """
        Write the raw results CSV and the summary CSV.

        Returns:
            Paths of the files written
        """
        start_time = time.time()
        frame = self.records_frame(records)
        summary = RunRecordProcessor.summarize(frame)
        written = [self._write(frame, self.results_path), self._write(summary, self.summary_path)]
        print(f"Results saved to {self.results_path}")
        print(f"Created {len(written)} CSV files in {time.time() - start_time:.2f} seconds")
        return written

    @staticmethod
    def _write(frame: pd.DataFrame, path: str) -> str:
        try:
            ensure_parent_folder(path)
            frame.to_csv(path, index=False, encoding="utf-8")
        except OSError as e:
            raise OutputWriteError(f"Cannot write {path}: {e}") from e
        return path

    @staticmethod
    def write_frame(frame: pd.DataFrame, path: str) -> str:
        return ReportGenerator._write(frame, path)


def load_results(path: str) -> pd.DataFrame:
    try:
        return pd.read_csv(path)
    except OSError as e:
        raise OutputWriteError(f"Cannot read results file {path}: {e}") from e


def rescore(results_path: str) -> pd.DataFrame:
    """Recompute the summary of a results CSV from its raw rows"""
    return RunRecordProcessor.summarize(load_results(results_path))
