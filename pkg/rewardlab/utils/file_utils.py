import os

from ..errors import OutputWriteError


def setup_output_folder(folder_path: str = None) -> str:
    """Create the results folder if needed and return its path"""
    folder_path = folder_path or os.environ.get("LAB_OUTPUT_DIR", "results")
    try:
        if not os.path.exists(folder_path):
            os.makedirs(folder_path)
    except OSError as e:
        raise OutputWriteError(f"Cannot create output folder {folder_path}: {e}") from e
    return folder_path


def ensure_parent_folder(file_path: str) -> str:
    """Create the directory that will hold ``file_path``"""
    parent = os.path.dirname(os.path.abspath(file_path))
    setup_output_folder(parent)
    return file_path


def summary_path_for(results_path: str) -> str:
    """results/curves.csv -> results/curves_summary.csv"""
    stem, ext = os.path.splitext(results_path)
    return f"{stem}_summary{ext or '.csv'}"
