#!/usr/bin/env python3
"""Tour of the binary matrix container and its JSON sidecar.

Every matrix (features, labels, embeddings, checkpoints) uses one 24-byte
little-endian header followed by a row-major payload, so files round-trip
bit-exactly across platforms. The sidecar records what the matrix is.
"""

import tempfile
from pathlib import Path

import numpy as np

from hoihead import dataio

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "demo.bin"

    m = np.array([[1.5, -2.25, 8.0], [0.5, 4.0, -1.0]], dtype=np.float32)
    dataio.write_matrix(m, dataio.DTYPE_F32, path)
    dataio.write_sidecar(path, role="features", classes_sha256="0" * 64)

    raw = path.read_bytes()
    print(f"file size: {len(raw)} bytes = 24 header + {m.size} * 4 payload")
    print(f"magic+version+dtype+reserved: {raw[:8].hex(' ')}")
    print(f"rows, cols (u64 LE):          {raw[8:24].hex(' ')}")

    back, dtype = dataio.read_matrix(path)
    print(f"\nround trip bit-exact: {np.array_equal(back, m)} (dtype code {dtype})")
    print(f"sidecar: {dataio.read_sidecar(path)}")

    # labels use int8 restricted to +1/-1; anything else is refused
    labels = np.array([[1, -1], [-1, 1]], dtype=np.int8)
    dataio.write_matrix(labels, dataio.DTYPE_I8, path)
    print(f"\nint8 label file size: {path.stat().st_size} bytes")
    try:
        dataio.write_matrix(np.array([[1, 0]]), dataio.DTYPE_I8, path)
    except Exception as exc:
        print(f"writing a 0 label fails: {exc}")

    # the reader validates the header before touching the payload
    bad = Path(tmp) / "bad.bin"
    bad.write_bytes(b"XXXX" + raw[4:])
    try:
        dataio.read_matrix(bad)
    except Exception as exc:
        print(f"bad magic fails:          {exc}")
