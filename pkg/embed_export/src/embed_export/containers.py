"""Writer for the binary matrix container consumed by the training toolkit.

The layout is the toolkit's stable on-disk interface (little-endian):
4-byte magic ``DEFR``, u8 version 1, u8 dtype code (0 = float32), u16
reserved 0, u64 rows, u64 cols, then the row-major float32 payload. Only
the float32 variant is needed here; correctness is cross-checked against
the toolkit's own reader in the test suite.
"""

from __future__ import annotations

import hashlib
import json
import struct
from pathlib import Path

import numpy as np

MAGIC = b"DEFR"
VERSION = 1
DTYPE_F32 = 0

_HEADER = struct.Struct("<4sBBHQQ")


def write_f32_matrix(m: np.ndarray, path) -> None:
    m = np.ascontiguousarray(m, dtype="<f4")
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("refusing to write non-finite values")
    rows, cols = m.shape
    with open(path, "wb") as f:
        f.write(_HEADER.pack(MAGIC, VERSION, DTYPE_F32, 0, rows, cols))
        f.write(m.tobytes())


def write_sidecar(path, meta: dict) -> None:
    Path(str(path) + ".meta.json").write_text(
        json.dumps(meta, indent=2) + "\n", encoding="utf-8"
    )


def sha256_of_file(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()
