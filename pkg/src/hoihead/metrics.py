"""Average precision / mAP, and drift of the classifier's row geometry.

AP uses the rank-based definition: sort by descending score (ties broken by
ascending original index, so results are deterministic) and average the
precision at each positive's rank. Classes without test positives are
skipped, not scored zero.

The drift report quantifies how much the pairwise cosine structure of the
weight rows changed between initialization and convergence: a Frobenius
distance between the two C x C row-similarity matrices, and the mean overlap
of each class's k nearest neighbor classes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DegenerateInputError


def average_precision(scores: np.ndarray, labels: np.ndarray) -> float:
    """AP of one class given per-image scores and +1/-1 relevance labels.

    Raises DegenerateInputError when there are no positives; callers must
    skip the class rather than record 0.
    """
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    if scores.ndim != 1 or scores.shape != labels.shape:
        raise ConfigError(
            f"scores {scores.shape} and labels {labels.shape} must be equal-length vectors"
        )
    if not np.all(np.isin(labels, (-1, 1))):
        raise ConfigError("labels must be +1 or -1")
    positive = labels == 1
    n_pos = int(positive.sum())
    if n_pos == 0:
        raise DegenerateInputError("class has no positive labels; skip it")

    order = np.lexsort((np.arange(len(scores)), -scores))
    hits = positive[order]
    cum_pos = np.cumsum(hits)
    ranks = np.arange(1, len(scores) + 1)
    return float(np.mean(cum_pos[hits] / ranks[hits]))


@dataclass
class ApReport:
    """Per-class AP (NaN for skipped classes) and their mean."""

    per_class_ap: np.ndarray
    map: float
    skipped_classes: list[int]

    def to_json_dict(self) -> dict:
        per_class = [
            None if i in set(self.skipped_classes) else float(v)
            for i, v in enumerate(self.per_class_ap)
        ]
        return {"map": self.map, "per_class_ap": per_class, "skipped": self.skipped_classes}


def map_eval(score_matrix: np.ndarray, labels: np.ndarray) -> ApReport:
    """Per-class AP over an (N, C) score matrix and matching label matrix."""
    score_matrix = np.asarray(score_matrix, dtype=np.float64)
    labels = np.asarray(labels)
    if score_matrix.shape != labels.shape or score_matrix.ndim != 2:
        raise ConfigError(
            f"scores {score_matrix.shape} and labels {labels.shape} must be equal (N, C)"
        )
    C = score_matrix.shape[1]
    per_class = np.full(C, np.nan)
    skipped = []
    for c in range(C):
        if np.any(labels[:, c] == 1):
            per_class[c] = average_precision(score_matrix[:, c], labels[:, c])
        else:
            skipped.append(c)
    if len(skipped) == C:
        raise DegenerateInputError("every class lacks positives; mAP undefined")
    mean_ap = float(np.nanmean(per_class))
    return ApReport(per_class_ap=per_class, map=mean_ap, skipped_classes=skipped)


def _row_cosine_matrix(W: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(W, axis=1)
    if np.any(norms == 0):
        raise DegenerateInputError("weight matrix has a zero-norm row")
    unit = W / norms[:, None]
    return unit @ unit.T


@dataclass
class DriftReport:
    frobenius_drift: float
    nn_overlap: float
    k: int

    def to_json_dict(self) -> dict:
        return {
            "frobenius_drift": self.frobenius_drift,
            f"nn_overlap@{self.k}": self.nn_overlap,
        }


def _knn_sets(S: np.ndarray, k: int) -> list[set]:
    C = S.shape[0]
    out = []
    for i in range(C):
        # descending similarity, ties by ascending index, self excluded
        order = np.lexsort((np.arange(C), -S[i]))
        order = order[order != i]
        out.append(set(order[:k].tolist()))
    return out


def structure_drift(W_init: np.ndarray, W_final: np.ndarray, k: int = 5) -> DriftReport:
    """Change in row-similarity structure between two weight matrices."""
    W_init = np.asarray(W_init, dtype=np.float64)
    W_final = np.asarray(W_final, dtype=np.float64)
    if W_init.shape != W_final.shape or W_init.ndim != 2:
        raise ConfigError(
            f"weight shapes differ: {W_init.shape} vs {W_final.shape}"
        )
    C = W_init.shape[0]
    if not 1 <= k <= C - 1:
        raise ConfigError(f"k must lie in [1, C-1], got k={k} with C={C}")
    S_init = _row_cosine_matrix(W_init)
    S_final = _row_cosine_matrix(W_final)
    drift = float(np.linalg.norm(S_init - S_final) / C)
    nn_init = _knn_sets(S_init, k)
    nn_final = _knn_sets(S_final, k)
    overlap = float(
        np.mean([len(a & b) / k for a, b in zip(nn_init, nn_final)])
    )
    return DriftReport(frobenius_drift=drift, nn_overlap=overlap, k=k)
