"""Bias-free cosine-similarity classifier with a fixed logit scale.

The logit for class i is ``gamma * cos(x, w_i)`` where ``w_i`` is row i of
the weight matrix, so every logit lies in [-gamma, +gamma] and the score is
invariant to the feature's magnitude. Rows act as per-class proxy vectors;
there is no bias term and gamma is a hyperparameter, never trained.
Gradients flow to the weights only; features are frozen inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DegenerateInputError

DEFAULT_GAMMA = 100.0


@dataclass
class ClassifierWeights:
    """C x D weight matrix plus the logit scale gamma."""

    W: np.ndarray
    gamma: float = DEFAULT_GAMMA

    def __post_init__(self):
        self.W = np.asarray(self.W, dtype=np.float64)
        if self.W.ndim != 2:
            raise ConfigError(f"weights must be 2-D, got shape {self.W.shape}")
        if self.gamma <= 0:
            raise ConfigError(f"gamma must be positive, got {self.gamma}")
        norms = np.linalg.norm(self.W, axis=1)
        if np.any(norms == 0):
            bad = int(np.flatnonzero(norms == 0)[0])
            raise DegenerateInputError(f"weight row {bad} has zero norm")

    @property
    def C(self) -> int:
        return self.W.shape[0]

    @property
    def D(self) -> int:
        return self.W.shape[1]


def _norms(x: np.ndarray, what: str) -> np.ndarray:
    norms = np.linalg.norm(x, axis=-1)
    if np.any(norms == 0):
        raise DegenerateInputError(f"{what} with zero norm")
    return norms


def forward(x: np.ndarray, W: np.ndarray, gamma: float = DEFAULT_GAMMA) -> np.ndarray:
    """Scaled cosine logits for one feature row (D,) or a batch (N, D).

    Returns shape (C,) or (N, C). The cosine is clamped to [-1, 1] so the
    +-gamma bound survives floating-point round-off.
    """
    x = np.asarray(x, dtype=np.float64)
    W = np.asarray(W, dtype=np.float64)
    if x.shape[-1] != W.shape[1]:
        raise ConfigError(
            f"feature dim {x.shape[-1]} does not match weight dim {W.shape[1]}"
        )
    x_norm = _norms(x, "feature vector")
    w_norm = _norms(W, "weight row")
    cos = (x @ W.T) / np.expand_dims(x_norm, -1) / w_norm
    np.clip(cos, -1.0, 1.0, out=cos)
    return gamma * cos


def weight_grad(
    x: np.ndarray, W: np.ndarray, gamma: float, dL_ds: np.ndarray
) -> np.ndarray:
    """Gradient of the loss w.r.t. W given upstream dL/d(logits).

    For a single feature x, row i is
    ``dL_ds[i] * gamma * (x / (|x||w_i|) - cos_i * w_i / |w_i|^2)``.
    For a batch, ``x`` is (N, D), ``dL_ds`` is (N, C) and per-sample
    contributions are summed in fixed row order.
    """
    x = np.asarray(x, dtype=np.float64)
    W = np.asarray(W, dtype=np.float64)
    dL_ds = np.asarray(dL_ds, dtype=np.float64)
    single = x.ndim == 1
    if single:
        x = x[None, :]
        dL_ds = dL_ds[None, :]
    if x.shape[1] != W.shape[1]:
        raise ConfigError(
            f"feature dim {x.shape[1]} does not match weight dim {W.shape[1]}"
        )
    if dL_ds.shape != (x.shape[0], W.shape[0]):
        raise ConfigError(
            f"dL_ds shape {dL_ds.shape} does not match (batch, classes) "
            f"({x.shape[0]}, {W.shape[0]})"
        )

    x_norm = _norms(x, "feature vector")
    w_norm = _norms(W, "weight row")
    x_hat = x / x_norm[:, None]
    w_hat = W / w_norm[:, None]
    cos = x_hat @ w_hat.T  # (N, C)

    # grad_i = gamma/|w_i| * (sum_n d_ni x_hat_n - (sum_n d_ni cos_ni) w_hat_i)
    term1 = dL_ds.T @ x_hat  # (C, D)
    term2 = np.sum(dL_ds * cos, axis=0)[:, None] * w_hat  # (C, D)
    return (gamma / w_norm)[:, None] * (term1 - term2)


def init_from_embeddings(E: np.ndarray, gamma: float = DEFAULT_GAMMA) -> ClassifierWeights:
    """Weights initialized to unit-normalized rows of a text-embedding set."""
    E = np.asarray(E, dtype=np.float64)
    if E.ndim != 2:
        raise ConfigError(f"embedding set must be 2-D, got shape {E.shape}")
    norms = np.linalg.norm(E, axis=1)
    if np.any(norms == 0):
        bad = int(np.flatnonzero(norms == 0)[0])
        raise DegenerateInputError(f"embedding row for class {bad} has zero norm")
    return ClassifierWeights(W=E / norms[:, None], gamma=gamma)


def init_random(
    C: int, D: int, seed: int, gamma: float = DEFAULT_GAMMA
) -> ClassifierWeights:
    """Weights with entries i.i.d. uniform on (-1/sqrt(D), +1/sqrt(D))."""
    if C < 1 or D < 1:
        raise ConfigError(f"need C >= 1 and D >= 1, got C={C}, D={D}")
    rng = np.random.default_rng(seed)
    bound = 1.0 / np.sqrt(D)
    W = rng.uniform(-bound, bound, size=(C, D))
    return ClassifierWeights(W=W, gamma=gamma)
