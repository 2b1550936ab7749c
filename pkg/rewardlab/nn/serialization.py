"""Flat binary parameter files.

Layout (little-endian): magic ``NRLB1``, uint32 layer count L, L x uint32 layer
sizes, uint64 parameter count P, then P float64 values. P may exceed the MLP's
own count; trailing values hold head-specific extras such as a log-std vector.
"""

import struct
from typing import Sequence, Tuple

import numpy as np

from ..errors import OutputWriteError, ParameterFileError

MAGIC = b"NRLB1"


def encode_params(sizes: Sequence[int], theta: np.ndarray) -> bytes:
    theta = np.ascontiguousarray(theta, dtype="<f8").reshape(-1)
    header = MAGIC + struct.pack("<I", len(sizes)) + struct.pack(f"<{len(sizes)}I", *sizes)
    return header + struct.pack("<Q", theta.size) + theta.tobytes()


def decode_params(blob: bytes) -> Tuple[Tuple[int, ...], np.ndarray]:
    if blob[: len(MAGIC)] != MAGIC:
        raise ParameterFileError("not a parameter file (bad magic bytes)")
    offset = len(MAGIC)
    try:
        (count,) = struct.unpack_from("<I", blob, offset)
        offset += 4
        sizes = struct.unpack_from(f"<{count}I", blob, offset)
        offset += 4 * count
        (n_params,) = struct.unpack_from("<Q", blob, offset)
    except struct.error as e:
        raise ParameterFileError(f"parameter file header truncated: {e}") from e
    offset += 8
    if len(blob) - offset != 8 * n_params:
        raise ParameterFileError(f"parameter file truncated: expected {n_params} values")
    theta = np.frombuffer(blob, dtype="<f8", count=n_params, offset=offset).astype(float)
    return tuple(sizes), theta


def save_params(path: str, sizes: Sequence[int], theta: np.ndarray) -> str:
    try:
        with open(path, "wb") as handle:
            handle.write(encode_params(sizes, theta))
    except OSError as e:
        raise OutputWriteError(f"Cannot write parameter file {path}: {e}") from e
    return path


def load_params(path: str) -> Tuple[Tuple[int, ...], np.ndarray]:
    try:
        with open(path, "rb") as handle:
            blob = handle.read()
    except OSError as e:
        raise OutputWriteError(f"Cannot read parameter file {path}: {e}") from e
    return decode_params(blob)
