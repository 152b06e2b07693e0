"""Bit-exact binary container for feature, label, embedding and weight matrices.

Layout (little-endian throughout)::

    offset  size  field
    0       4     magic  b"DEFR"
    4       1     version, currently 1
    5       1     dtype code: 0 = IEEE-754 float32, 1 = signed int8
    6       2     reserved, must be 0
    8       8     rows (u64)
    16      8     cols (u64)
    24      -     payload: rows*cols values, row-major

File size is exactly ``24 + rows*cols*itemsize``. Int8 payloads may only
contain +1 and -1 (label matrices). A plain-JSON sidecar ``<file>.meta.json``
records the matrix role and provenance; concurrent writes to one path are a
caller error.
"""

from __future__ import annotations

import hashlib
import json
import struct
from pathlib import Path

import numpy as np

from .errors import ConfigError, DataFormatError

MAGIC = b"DEFR"
VERSION = 1
DTYPE_F32 = 0
DTYPE_I8 = 1

_HEADER = struct.Struct("<4sBBHQQ")
HEADER_SIZE = _HEADER.size  # 24 bytes

_NP_DTYPES = {DTYPE_F32: np.dtype("<f4"), DTYPE_I8: np.dtype("i1")}


def write_matrix(m: np.ndarray, dtype: int, path) -> None:
    """Write a 2-D matrix to ``path`` in the container layout above.

    Float payloads must be finite; int8 payloads must contain only +1/-1.
    """
    m = np.asarray(m)
    if m.ndim != 2:
        raise ConfigError(f"expected a 2-D matrix, got shape {m.shape}")
    if dtype not in _NP_DTYPES:
        raise ConfigError(f"unknown dtype code {dtype}")

    if dtype == DTYPE_F32:
        payload = np.ascontiguousarray(m, dtype=_NP_DTYPES[DTYPE_F32])
        if not np.all(np.isfinite(payload)):
            raise ConfigError("refusing to write non-finite float values")
    else:
        if not np.all(np.isin(m, (-1, 1))):
            raise ConfigError("int8 payload values must be +1 or -1")
        payload = np.ascontiguousarray(m, dtype=_NP_DTYPES[DTYPE_I8])

    rows, cols = m.shape
    header = _HEADER.pack(MAGIC, VERSION, dtype, 0, rows, cols)
    with open(path, "wb") as f:
        f.write(header)
        f.write(payload.tobytes())


def read_matrix(path) -> tuple[np.ndarray, int]:
    """Read a container file, returning ``(matrix, dtype_code)``.

    The returned array has dtype float32 or int8 matching the payload, so
    a write -> read round trip is bit-identical.
    """
    raw = Path(path).read_bytes()
    if len(raw) < HEADER_SIZE:
        raise DataFormatError(f"{path}: file shorter than the 24-byte header")
    magic, version, dtype, reserved, rows, cols = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise DataFormatError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise DataFormatError(f"{path}: unsupported version {version}")
    if dtype not in _NP_DTYPES:
        raise DataFormatError(f"{path}: unknown dtype code {dtype}")
    if reserved != 0:
        raise DataFormatError(f"{path}: reserved header field is {reserved}, not 0")

    np_dtype = _NP_DTYPES[dtype]
    expected = HEADER_SIZE + rows * cols * np_dtype.itemsize
    if len(raw) != expected:
        raise DataFormatError(
            f"{path}: header declares {rows}x{cols} ({expected} bytes), "
            f"file has {len(raw)} bytes"
        )
    m = np.frombuffer(raw[HEADER_SIZE:], dtype=np_dtype).reshape(rows, cols).copy()
    if dtype == DTYPE_I8 and not np.all(np.isin(m, (-1, 1))):
        raise DataFormatError(f"{path}: int8 payload contains values outside {{+1,-1}}")
    return m, dtype


def sidecar_path(path) -> Path:
    return Path(str(path) + ".meta.json")


def write_sidecar(path, role: str, classes_sha256: str | None = None, gamma: float | None = None, **extra) -> None:
    """Write the ``<file>.meta.json`` provenance sidecar for a container."""
    if role not in ("features", "labels", "embeddings", "weights"):
        raise ConfigError(f"unknown sidecar role {role!r}")
    meta: dict = {"role": role}
    if classes_sha256 is not None:
        meta["classes_sha256"] = classes_sha256
    if gamma is not None:
        meta["gamma"] = float(gamma)
    meta.update(extra)
    sidecar_path(path).write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")


def read_sidecar(path) -> dict | None:
    """Read a container's sidecar, or None if it does not exist."""
    p = sidecar_path(path)
    if not p.exists():
        return None
    return json.loads(p.read_text(encoding="utf-8"))


def sha256_of_file(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()
