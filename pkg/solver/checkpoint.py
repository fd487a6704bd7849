# solver/checkpoint.py
"""Binary field dumps: fixed little-endian header followed by complex128 data"""
import logging
import struct
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np

from errors import CheckpointError
from .grid import FieldState, GridDescriptor

logger = logging.getLogger(__name__)

MAGIC = b"GNLS"
VERSION = 1
# magic, version, N, n, L, t, dt
_HEADER = struct.Struct("<4sIIIddd")
_DTYPE = np.dtype("<c16")


def checkpoint_name(step: int) -> str:
    return f"step_{step:09d}.gnls"


def write_checkpoint(path: Union[str, Path], state: FieldState, dt: float) -> Path:
    """Write `state` atomically (temp file then rename)"""
    path = Path(path)
    grid = state.grid
    header = _HEADER.pack(MAGIC, VERSION, grid.n_components, grid.n, grid.box_length, state.t, dt)
    tmp = path.with_suffix(path.suffix + ".tmp")
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(tmp, "wb") as f:
            f.write(header)
            f.write(np.ascontiguousarray(state.data, dtype=_DTYPE).tobytes(order="C"))
        tmp.replace(path)
    except OSError as e:
        raise CheckpointError(f"Failed to write checkpoint {path}: {e}") from e
    logger.debug("checkpoint t=%.6f written to %s", state.t, path)
    return path


def read_header(path: Union[str, Path]) -> dict:
    path = Path(path)
    try:
        with open(path, "rb") as f:
            raw = f.read(_HEADER.size)
    except OSError as e:
        raise CheckpointError(f"Failed to read checkpoint {path}: {e}") from e
    if len(raw) != _HEADER.size:
        raise CheckpointError(f"{path} is too short for a checkpoint header")
    magic, version, n_components, n, box_length, t, dt = _HEADER.unpack(raw)
    if magic != MAGIC:
        raise CheckpointError(f"{path} is not a checkpoint (magic {magic!r})")
    if version != VERSION:
        raise CheckpointError(f"{path} has unsupported version {version}")
    return {"n_components": n_components, "n": n, "box_length": box_length, "t": t, "dt": dt}


def read_checkpoint(path: Union[str, Path], workers: Optional[int] = None) -> Tuple[FieldState, float]:
    """Return the stored field and the dt it was written with"""
    path = Path(path)
    header = read_header(path)
    try:
        grid = GridDescriptor(header["n"], header["box_length"], header["n_components"], workers=workers)
    except ValueError as e:
        raise CheckpointError(f"Failed to read checkpoint {path}: {e}") from e

    count = int(np.prod(grid.shape))
    try:
        data = np.fromfile(path, dtype=_DTYPE, offset=_HEADER.size)
    except OSError as e:
        raise CheckpointError(f"Failed to read checkpoint {path}: {e}") from e
    if data.size != count:
        raise CheckpointError(f"{path} holds {data.size} values, header implies {count}")
    state = FieldState(grid, data.reshape(grid.shape).astype(complex), header["t"])
    return state, header["dt"]
