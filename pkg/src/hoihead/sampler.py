"""Train/validation splitting and class-balanced oversampling.

Multi-label datasets are usually long-tailed, so each epoch replicates
training indices until every class with any positives reaches a per-epoch
floor of positive examples. Replicas added for one class count toward the
floors of every class they are positive for, which keeps epoch inflation
minimal. Everything is deterministic given its seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

DEFAULT_VAL_FRACTION = 0.10
DEFAULT_MIN_PER_CLASS = 40


@dataclass(frozen=True)
class SplitPlan:
    """Disjoint train/validation index sets covering [0, N)."""

    train_indices: np.ndarray
    val_indices: np.ndarray
    val_fraction: float
    seed: int


@dataclass(frozen=True)
class EpochPlan:
    """Shuffled index multiset (train indices, possibly replicated)."""

    indices: np.ndarray
    min_per_class: int
    seed: int

    def __len__(self) -> int:
        return len(self.indices)


def split(N: int, val_fraction: float = DEFAULT_VAL_FRACTION, seed: int = 0) -> SplitPlan:
    """Uniform random split with round(val_fraction * N) validation images."""
    if N < 2:
        raise ConfigError(f"need at least 2 images to split, got {N}")
    if not 0.0 < val_fraction < 1.0:
        raise ConfigError(f"val_fraction must lie in (0, 1), got {val_fraction}")
    n_val = int(round(val_fraction * N))
    if n_val == 0 or n_val == N:
        raise ConfigError(
            f"split of {N} images at fraction {val_fraction} leaves an empty side"
        )
    perm = np.random.default_rng(seed).permutation(N)
    return SplitPlan(
        train_indices=np.sort(perm[n_val:]),
        val_indices=np.sort(perm[:n_val]),
        val_fraction=val_fraction,
        seed=seed,
    )


def plan_epoch(
    train_labels: np.ndarray,
    train_indices: np.ndarray,
    min_per_class: int = DEFAULT_MIN_PER_CLASS,
    seed: int = 0,
) -> EpochPlan:
    """Oversampled, shuffled index plan for one epoch.

    ``train_labels`` is the (N_train, C) +1/-1 matrix aligned with
    ``train_indices``. Starting from one copy of every train index, classes
    are swept in ascending order; a class below the floor has its positive
    indices replicated round-robin until its positive coverage reaches
    ``min_per_class``. Classes without positives are skipped.
    """
    train_labels = np.asarray(train_labels)
    train_indices = np.asarray(train_indices)
    if train_labels.ndim != 2 or train_labels.shape[0] != len(train_indices):
        raise ConfigError(
            f"labels shape {train_labels.shape} does not match "
            f"{len(train_indices)} train indices"
        )
    if min_per_class < 0:
        raise ConfigError(f"min_per_class must be >= 0, got {min_per_class}")

    positive = train_labels == 1  # (N_train, C)
    coverage = positive.sum(axis=0).astype(np.int64)  # one copy of each index
    plan_rows = list(range(len(train_indices)))  # row ids into train_indices

    for c in range(train_labels.shape[1]):
        pos_rows = np.flatnonzero(positive[:, c])
        if len(pos_rows) == 0:
            continue
        k = 0
        while coverage[c] < min_per_class:
            row = pos_rows[k % len(pos_rows)]
            plan_rows.append(int(row))
            coverage += positive[row]
            k += 1

    rng = np.random.default_rng(seed)
    order = rng.permutation(len(plan_rows))
    rows = np.asarray(plan_rows)[order]
    return EpochPlan(
        indices=train_indices[rows], min_per_class=min_per_class, seed=seed
    )


def batches(plan: EpochPlan, batch_size: int) -> list[np.ndarray]:
    """Consecutive chunks of the plan; the final partial batch is kept."""
    if batch_size < 1:
        raise ConfigError(f"batch_size must be >= 1, got {batch_size}")
    idx = plan.indices
    return [idx[i : i + batch_size] for i in range(0, len(idx), batch_size)]
