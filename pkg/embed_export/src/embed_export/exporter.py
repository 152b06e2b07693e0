"""Read a prompt file, embed every line, write the matrix container."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .containers import sha256_of_file, write_f32_matrix, write_sidecar
from .encoders import resolve_encoder


@dataclass
class ExportConfig:
    prompts_path: str
    encoder_name: str
    output_path: str
    normalize: bool = True


def read_prompts(path) -> list[str]:
    """Prompt lines in file order; blank lines are an error, not skipped."""
    text = Path(path).read_text(encoding="utf-8")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ValueError(f"{path}: prompt file is empty")
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            raise ValueError(f"{path}: line {lineno} is empty")
    return lines


def export(config: ExportConfig) -> dict:
    """Run the encoder over the prompts and write container + sidecar.

    Rows follow prompt order. With normalization on, every row is rescaled
    to unit L2 norm. Returns the sidecar metadata.
    """
    prompts = read_prompts(config.prompts_path)
    encoder = resolve_encoder(config.encoder_name)
    emb = np.asarray(encoder.encode(prompts), dtype=np.float64)
    if emb.shape[0] != len(prompts):
        raise RuntimeError(
            f"encoder returned {emb.shape[0]} rows for {len(prompts)} prompts"
        )
    if config.normalize:
        norms = np.linalg.norm(emb, axis=1)
        if np.any(norms == 0):
            bad = int(np.flatnonzero(norms == 0)[0])
            raise ValueError(f"prompt {bad + 1} produced a zero embedding")
        emb = emb / norms[:, None]

    out = Path(config.output_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_f32_matrix(emb, out)
    meta = {
        "role": "embeddings",
        "encoder": config.encoder_name,
        "pooling": encoder.pooling,
        "normalize": config.normalize,
        "prompts_sha256": sha256_of_file(config.prompts_path),
        "rows": emb.shape[0],
        "cols": emb.shape[1],
    }
    write_sidecar(out, meta)
    return meta
