"""Synthetic multi-label benchmarks for desk-scale experiments.

Real HOI corpora need a pretrained backbone to produce features, so the
experiment harness ships two generators that mimic the relevant structure
directly in feature space:

* ``make_benchmark``: long-tailed multi-label data. Each class has a random
  unit prototype; an image's feature is the sum of its positive classes'
  prototypes plus noise. Class frequencies follow a power law, and the
  "text embeddings" handed to embedding initialization are noisy copies of
  the prototypes, standing in for encoder output that is aligned with, but
  not identical to, the feature space.
* ``make_separable``: an easy sanity set with orthonormal prototypes, one
  label per image and low noise, which a cosine head must solve exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import dataio
from .errors import ConfigError

# Shipped benchmark defaults (desk scale, a few seconds per training run).
BENCHMARK_C = 64
BENCHMARK_D = 32
BENCHMARK_N = 1200
BENCHMARK_ALPHA = 1.3
BENCHMARK_MAX_POSITIVES = 3
BENCHMARK_FEATURE_NOISE = 0.8
BENCHMARK_EMBED_NOISE = 0.7
BENCHMARK_DATA_SEED = 7
# Training recipe for benchmark runs. The desk-scale features move further
# per step than encoder output would, hence the larger peak rate.
BENCHMARK_BASE_LR = 3e-3
BENCHMARK_TRAIN_SEEDS = (0, 1, 2)


@dataclass
class SynthData:
    """Generated arrays plus the ground-truth prototypes."""

    features: np.ndarray
    labels: np.ndarray
    embeddings: np.ndarray
    prototypes: np.ndarray

    @property
    def class_lines(self) -> list[str]:
        return [f"hold item_{i:03d}" for i in range(self.labels.shape[1])]

    def write(self, out_dir) -> dict:
        """Write container files + class list into ``out_dir``; returns paths."""
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        paths = {
            "features": out / "features.bin",
            "labels": out / "labels.bin",
            "embeddings": out / "embeddings.bin",
            "classes": out / "classes.txt",
        }
        paths["classes"].write_text("\n".join(self.class_lines) + "\n", encoding="utf-8")
        classes_sha = dataio.sha256_of_file(paths["classes"])
        dataio.write_matrix(self.features, dataio.DTYPE_F32, paths["features"])
        dataio.write_sidecar(paths["features"], "features", classes_sha)
        dataio.write_matrix(self.labels, dataio.DTYPE_I8, paths["labels"])
        dataio.write_sidecar(paths["labels"], "labels", classes_sha)
        dataio.write_matrix(self.embeddings, dataio.DTYPE_F32, paths["embeddings"])
        dataio.write_sidecar(paths["embeddings"], "embeddings", classes_sha)
        return {k: str(v) for k, v in paths.items()}


def power_law_frequencies(C: int, alpha: float) -> np.ndarray:
    """Class sampling probabilities proportional to 1/(rank+1)^alpha."""
    freq = (np.arange(1, C + 1)) ** (-alpha)
    return freq / freq.sum()


def make_benchmark(
    n_images: int = BENCHMARK_N,
    C: int = BENCHMARK_C,
    D: int = BENCHMARK_D,
    seed: int = 0,
    alpha: float = BENCHMARK_ALPHA,
    max_positives: int = BENCHMARK_MAX_POSITIVES,
    feature_noise: float = BENCHMARK_FEATURE_NOISE,
    embed_noise: float = BENCHMARK_EMBED_NOISE,
) -> SynthData:
    """Long-tailed multi-label benchmark; deterministic for a fixed seed."""
    if n_images < 2 or C < 2 or D < 2:
        raise ConfigError("benchmark needs n_images, C, D all >= 2")
    if max_positives < 1 or max_positives > C:
        raise ConfigError(f"max_positives must lie in [1, C], got {max_positives}")
    rng = np.random.default_rng(seed)

    protos = rng.normal(size=(C, D))
    protos /= np.linalg.norm(protos, axis=1, keepdims=True)
    freq = power_law_frequencies(C, alpha)

    positives = []
    for _ in range(n_images):
        k = int(rng.integers(1, max_positives + 1))
        positives.append(set(rng.choice(C, size=k, replace=False, p=freq).tolist()))

    # Give every class at least one positive image so splits stay usable.
    covered = set().union(*positives)
    for c in range(C):
        if c not in covered:
            positives[int(rng.integers(n_images))].add(c)

    labels = -np.ones((n_images, C), dtype=np.int8)
    features = np.zeros((n_images, D))
    for n, pos in enumerate(positives):
        pos = sorted(pos)
        labels[n, pos] = 1
        noise = rng.normal(size=D) * feature_noise / np.sqrt(D)
        features[n] = protos[pos].sum(axis=0) + noise

    emb = protos + rng.normal(size=(C, D)) * embed_noise / np.sqrt(D)
    emb /= np.linalg.norm(emb, axis=1, keepdims=True)
    return SynthData(
        features=features, labels=labels, embeddings=emb, prototypes=protos
    )


def benchmark_config(paths: dict, out_dir, seed: int = 0, **overrides):
    """Shipped training config for benchmark runs (see BENCHMARK_* constants).

    ``paths`` is the dict returned by ``SynthData.write``. Extra keyword
    arguments override TrainConfig fields.
    """
    from .harness import TrainConfig  # deferred: synth sits below harness otherwise

    kwargs = dict(
        features_path=paths["features"],
        labels_path=paths["labels"],
        classes_path=paths["classes"],
        embeddings_path=paths["embeddings"],
        out_dir=str(out_dir),
        init="embeddings",
        loss="lse-sign",
        base_lr=BENCHMARK_BASE_LR,
        seed=seed,
    )
    kwargs.update(overrides)
    return TrainConfig(**kwargs)


def make_separable(
    n_images: int = 512, C: int = 8, D: int = 16, seed: int = 0, noise: float = 0.05
) -> SynthData:
    """Single-label data around orthonormal prototypes; solvable to mAP 1.0."""
    if C > D:
        raise ConfigError(f"orthonormal prototypes need C <= D, got C={C}, D={D}")
    rng = np.random.default_rng(seed)
    Q, _ = np.linalg.qr(rng.normal(size=(D, D)))
    protos = Q[:C]

    assignments = rng.integers(0, C, size=n_images)
    labels = -np.ones((n_images, C), dtype=np.int8)
    labels[np.arange(n_images), assignments] = 1
    features = protos[assignments] + rng.normal(size=(n_images, D)) * noise / np.sqrt(D)
    return SynthData(
        features=features, labels=labels, embeddings=protos.copy(), prototypes=protos
    )
