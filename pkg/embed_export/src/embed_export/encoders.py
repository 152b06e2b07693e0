"""Text encoders addressable by name.

Two families:

* ``hash`` / ``hash:<dim>`` — a dependency-free feature-hashing encoder.
  Every token maps to a fixed pseudorandom direction derived from its
  SHA-256 digest, and a sentence is the sum of its token vectors. Not a
  learned embedding, but fully deterministic across runs and platforms,
  which makes it the right default for pipeline tests and offline use.
* anything else — treated as a sentence-transformers model name (loaded
  lazily; mean pooling, deterministic inference). Unavailable runtimes or
  models produce an actionable error naming the encoder.
"""

from __future__ import annotations

import hashlib

import numpy as np


class EncoderUnavailable(Exception):
    """The named encoder cannot be loaded in this environment."""


class HashingEncoder:
    """Deterministic bag-of-tokens random-projection encoder."""

    pooling = "token-sum"

    def __init__(self, dim: int = 256):
        if dim < 1:
            raise ValueError(f"encoder dimension must be >= 1, got {dim}")
        self.dim = dim
        self._cache: dict[str, np.ndarray] = {}

    def _token_vector(self, token: str) -> np.ndarray:
        vec = self._cache.get(token)
        if vec is None:
            digest = hashlib.sha256(token.encode("utf-8")).digest()
            seed = int.from_bytes(digest[:8], "little")
            vec = np.random.default_rng(seed).standard_normal(self.dim)
            self._cache[token] = vec
        return vec

    def encode(self, texts: list[str]) -> np.ndarray:
        out = np.zeros((len(texts), self.dim))
        for i, text in enumerate(texts):
            for token in text.split():
                out[i] += self._token_vector(token)
        return out


class SentenceTransformerEncoder:
    """Adapter over sentence-transformers, mean-pooled."""

    pooling = "mean"

    def __init__(self, model_name: str):
        self.model_name = model_name
        try:
            from sentence_transformers import SentenceTransformer
        except ImportError as exc:
            raise EncoderUnavailable(
                f"encoder {model_name!r} needs the sentence-transformers package "
                f"(pip install sentence-transformers)"
            ) from exc
        try:
            self._model = SentenceTransformer(model_name)
        except Exception as exc:
            raise EncoderUnavailable(
                f"could not load encoder {model_name!r}: {exc}"
            ) from exc

    def encode(self, texts: list[str]) -> np.ndarray:
        emb = self._model.encode(
            texts, convert_to_numpy=True, normalize_embeddings=False,
            show_progress_bar=False,
        )
        return np.asarray(emb, dtype=np.float64)


def resolve_encoder(name: str):
    if name == "hash" or name.startswith("hash:"):
        dim = int(name.split(":", 1)[1]) if ":" in name else 256
        return HashingEncoder(dim)
    return SentenceTransformerEncoder(name)
