"""End-to-end training and evaluation of cosine classifier heads.

``train`` wires the pieces together: split the images, oversample the
training side per epoch, run batched cosine forward passes, backpropagate
the chosen loss into the weight rows with Adam under a warm-restart cosine
schedule, and keep the weights of the best validation-mAP epoch. Everything
is deterministic for a fixed config and seed; validation scoring always
views the weights through checkpoint (float32) precision so that a reloaded
checkpoint reproduces the recorded mAP bit for bit.

``sweep_gamma`` and ``ablate`` rerun training across logit scales and
across {init} x {loss} cells to reproduce the directional effects of
embedding initialization and the LSE-Sign loss on synthetic data.
"""

from __future__ import annotations

import dataclasses
import json
import logging
import math
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import dataio, sampler
from .classifier import (
    DEFAULT_GAMMA,
    forward,
    init_from_embeddings,
    init_random,
    weight_grad,
)
from .errors import ConfigError, NumericFailure
from .labelspace import parse_class_list
from .losses import LOSS_KINDS, ClassStats, resolve_loss
from .metrics import ApReport, map_eval, structure_drift
from .optim import AdamState, Schedule, adam_step, lr_at

log = logging.getLogger("hoihead")

INIT_KINDS = ("random", "embeddings")


@dataclass
class TrainConfig:
    features_path: str
    labels_path: str
    classes_path: str
    out_dir: str
    init: str = "random"
    embeddings_path: str | None = None
    loss: str = "lse-sign"
    gamma: float = DEFAULT_GAMMA
    base_lr: float = 1e-4  # use 1e-5 for strongly pre-aligned feature spaces
    epochs: int = 10
    batch_size: int = 128
    min_per_class: int = sampler.DEFAULT_MIN_PER_CLASS
    val_fraction: float = sampler.DEFAULT_VAL_FRACTION
    restart_period: int = 5
    seed: int = 0
    test_features_path: str | None = None
    test_labels_path: str | None = None

    def validate(self) -> None:
        if self.init not in INIT_KINDS:
            raise ConfigError(f"init must be one of {INIT_KINDS}, got {self.init!r}")
        if self.init == "embeddings" and not self.embeddings_path:
            raise ConfigError("init=embeddings requires an embeddings path")
        if self.loss not in LOSS_KINDS:
            raise ConfigError(f"loss must be one of {LOSS_KINDS}, got {self.loss!r}")
        if self.gamma <= 0:
            raise ConfigError(f"gamma must be positive, got {self.gamma}")
        if self.base_lr <= 0:
            raise ConfigError(f"base_lr must be positive, got {self.base_lr}")
        if self.epochs < 1 or self.batch_size < 1 or self.restart_period < 1:
            raise ConfigError("epochs, batch_size and restart_period must be >= 1")
        if self.min_per_class < 0:
            raise ConfigError("min_per_class must be >= 0")
        if not 0.0 < self.val_fraction < 1.0:
            raise ConfigError(f"val_fraction must lie in (0, 1), got {self.val_fraction}")
        for name in ("features_path", "labels_path", "classes_path"):
            p = getattr(self, name)
            if not Path(p).is_file():
                raise ConfigError(f"{name} {p!r} is not a readable file")
        if (self.test_features_path is None) != (self.test_labels_path is None):
            raise ConfigError("test features and test labels must be supplied together")


@dataclass
class RunRecord:
    """Everything a finished training run reports."""

    config: dict
    epoch_train_loss: list[float]
    epoch_val_map: list[float]
    best_epoch: int
    best_val_map: float
    nn_overlap: float
    frobenius_drift: float
    test_map: float | None
    wall_time_s: float
    checkpoint_path: str
    init_weights_path: str

    def to_json_dict(self) -> dict:
        return dataclasses.asdict(self)

    def save(self, path) -> None:
        Path(path).write_text(
            json.dumps(self.to_json_dict(), indent=2) + "\n", encoding="utf-8"
        )


def load_features(path) -> np.ndarray:
    m, dtype = dataio.read_matrix(path)
    if dtype != dataio.DTYPE_F32:
        raise ConfigError(f"{path}: features must be a float32 container")
    X = m.astype(np.float64)
    if not np.all(np.isfinite(X)):
        raise ConfigError(f"{path}: features contain non-finite values")
    if np.any(np.linalg.norm(X, axis=1) == 0):
        raise ConfigError(f"{path}: features contain an all-zero row")
    return X


def load_labels(path) -> np.ndarray:
    m, dtype = dataio.read_matrix(path)
    if dtype != dataio.DTYPE_I8:
        raise ConfigError(f"{path}: labels must be an int8 container")
    if not np.all(np.any(m == 1, axis=1)):
        bad = int(np.flatnonzero(~np.any(m == 1, axis=1))[0])
        raise ConfigError(f"{path}: image {bad} has no positive class")
    return m


def _checkpoint_view(W: np.ndarray) -> np.ndarray:
    # Score with the precision a reloaded checkpoint would have.
    return W.astype(np.float32).astype(np.float64)


def train(config: TrainConfig) -> RunRecord:
    """Run one training job and write checkpoints + run.json to out_dir.

    Randomness derives from config.seed through fixed streams: the split
    uses [seed, 0], random init [seed, 1] and the epoch-e plan [seed, 2+e],
    so the split can be reconstructed from the config alone.
    """
    config.validate()
    t0 = time.perf_counter()

    X = load_features(config.features_path)
    labels = load_labels(config.labels_path)
    classes = parse_class_list(Path(config.classes_path).read_text(encoding="utf-8"))
    classes_sha = dataio.sha256_of_file(config.classes_path)
    N, D = X.shape
    if labels.shape[0] != N:
        raise ConfigError(
            f"feature rows ({N}) do not match label rows ({labels.shape[0]})"
        )
    C = labels.shape[1]
    if classes.C != C:
        raise ConfigError(
            f"label columns ({C}) do not match class-list size ({classes.C})"
        )

    if config.init == "embeddings":
        E, e_dtype = dataio.read_matrix(config.embeddings_path)
        if e_dtype != dataio.DTYPE_F32:
            raise ConfigError(f"{config.embeddings_path}: embeddings must be float32")
        if E.shape[1] != D:
            raise ConfigError(
                f"embedding dim ({E.shape[1]}) does not match feature dim ({D})"
            )
        if E.shape[0] != C:
            raise ConfigError(
                f"embedding rows ({E.shape[0]}) do not match class count ({C})"
            )
        weights = init_from_embeddings(E, gamma=config.gamma)
    else:
        weights = init_random(C, D, seed=[config.seed, 1], gamma=config.gamma)
    W = weights.W
    gamma = config.gamma

    plan_split = sampler.split(N, config.val_fraction, seed=[config.seed, 0])
    train_idx = plan_split.train_indices
    val_idx = plan_split.val_indices
    Y_train = labels[train_idx]
    stats = ClassStats.from_labels(Y_train)
    loss_fn, grad_fn = resolve_loss(config.loss, stats)
    labels_pm = labels.astype(np.float64)

    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    init_path = out_dir / "weights_init.bin"
    dataio.write_matrix(W.astype(np.float32), dataio.DTYPE_F32, init_path)
    dataio.write_sidecar(init_path, "weights", classes_sha, gamma=gamma)
    W_init32 = _checkpoint_view(W)

    first_plan = sampler.plan_epoch(
        Y_train, train_idx, config.min_per_class, seed=[config.seed, 2]
    )
    steps_per_epoch = math.ceil(len(first_plan) / config.batch_size)
    schedule = Schedule(
        base_lr=config.base_lr,
        steps_per_epoch=steps_per_epoch,
        min_lr=0.0,
        restart_period=config.restart_period,
    )

    state = AdamState.zeros(W.shape)
    global_step = 0
    epoch_train_loss: list[float] = []
    epoch_val_map: list[float] = []
    best_epoch = -1
    best_val = -np.inf
    best_W: np.ndarray | None = None

    for epoch in range(config.epochs):
        plan = (
            first_plan
            if epoch == 0
            else sampler.plan_epoch(
                Y_train, train_idx, config.min_per_class, seed=[config.seed, 2 + epoch]
            )
        )
        loss_sum = 0.0
        sample_count = 0
        for batch_idx in sampler.batches(plan, config.batch_size):
            Xb = X[batch_idx]
            Yb = labels_pm[batch_idx]
            s = forward(Xb, W, gamma)
            per_sample = loss_fn(s, Yb)
            batch_loss = float(np.mean(per_sample))
            if not np.isfinite(batch_loss):
                raise NumericFailure(
                    f"non-finite {config.loss} loss at step {global_step}"
                )
            dL_ds = grad_fn(s, Yb) / len(batch_idx)
            G = weight_grad(Xb, W, gamma, dL_ds)
            W, state = adam_step(W, G, state, lr_at(schedule, global_step))
            global_step += 1
            loss_sum += batch_loss * len(batch_idx)
            sample_count += len(batch_idx)
        epoch_train_loss.append(loss_sum / sample_count)

        W_view = _checkpoint_view(W)
        val_map = map_eval(forward(X[val_idx], W_view, gamma), labels[val_idx]).map
        epoch_val_map.append(val_map)
        log.info(
            "epoch %d: train loss %.6f, val mAP %.4f", epoch, epoch_train_loss[-1], val_map
        )
        if val_map > best_val:
            best_val = val_map
            best_epoch = epoch
            best_W = W_view

    assert best_W is not None
    ckpt_path = out_dir / "weights_best.bin"
    dataio.write_matrix(best_W.astype(np.float32), dataio.DTYPE_F32, ckpt_path)
    dataio.write_sidecar(ckpt_path, "weights", classes_sha, gamma=gamma)

    drift = structure_drift(W_init32, best_W, k=min(5, C - 1))
    test_map = None
    if config.test_features_path is not None:
        X_test = load_features(config.test_features_path)
        y_test = load_labels(config.test_labels_path)
        if X_test.shape[1] != D:
            raise ConfigError(
                f"test feature dim ({X_test.shape[1]}) does not match train dim ({D})"
            )
        test_map = map_eval(forward(X_test, best_W, gamma), y_test).map

    record = RunRecord(
        config=dataclasses.asdict(config),
        epoch_train_loss=epoch_train_loss,
        epoch_val_map=epoch_val_map,
        best_epoch=best_epoch,
        best_val_map=best_val,
        nn_overlap=drift.nn_overlap,
        frobenius_drift=drift.frobenius_drift,
        test_map=test_map,
        wall_time_s=time.perf_counter() - t0,
        checkpoint_path=str(ckpt_path),
        init_weights_path=str(init_path),
    )
    record.save(out_dir / "run.json")
    return record


def evaluate(
    weights_path, features_path, labels_path, gamma: float | None = None
) -> ApReport:
    """Score a saved checkpoint on a feature/label pair."""
    W, w_dtype = dataio.read_matrix(weights_path)
    if w_dtype != dataio.DTYPE_F32:
        raise ConfigError(f"{weights_path}: weights must be a float32 container")
    sidecar = dataio.read_sidecar(weights_path)
    sidecar_gamma = None if sidecar is None else sidecar.get("gamma")
    if gamma is None:
        if sidecar_gamma is None:
            gamma = DEFAULT_GAMMA
            log.warning(
                "%s has no sidecar gamma; using default %g", weights_path, gamma
            )
        else:
            gamma = float(sidecar_gamma)
    elif sidecar_gamma is not None and not math.isclose(gamma, sidecar_gamma):
        log.warning(
            "gamma flag %g differs from training sidecar %g; using %g",
            gamma,
            sidecar_gamma,
            gamma,
        )

    X = load_features(features_path)
    labels = load_labels(labels_path)
    if X.shape[0] != labels.shape[0]:
        raise ConfigError(
            f"feature rows ({X.shape[0]}) do not match label rows ({labels.shape[0]})"
        )
    if W.shape[0] != labels.shape[1]:
        raise ConfigError(
            f"weight rows ({W.shape[0]}) do not match label columns ({labels.shape[1]})"
        )
    if W.shape[1] != X.shape[1]:
        raise ConfigError(
            f"weight dim ({W.shape[1]}) does not match feature dim ({X.shape[1]})"
        )
    return map_eval(forward(X, W.astype(np.float64), gamma), labels)


def sweep_gamma(config: TrainConfig, gammas: list[float]) -> list[dict]:
    """Retrain once per gamma with a shared seed; returns one row per gamma."""
    if not gammas:
        raise ConfigError("sweep needs at least one gamma value")
    rows = []
    for g in gammas:
        cfg = dataclasses.replace(
            config, gamma=g, out_dir=str(Path(config.out_dir) / f"gamma_{g:g}")
        )
        rec = train(cfg)
        rows.append({"gamma": g, "val_map": rec.best_val_map})
    return rows


ABLATION_CELLS = [
    ("random", "bce"),
    ("random", "lse-sign"),
    ("embeddings", "bce"),
    ("embeddings", "lse-sign"),
]


def ablate(config: TrainConfig) -> dict:
    """2x2 grid over {random, embeddings} init and {bce, lse-sign} loss."""
    if not config.embeddings_path:
        raise ConfigError("ablate requires an embeddings path")
    grid = {}
    for init, loss in ABLATION_CELLS:
        cfg = dataclasses.replace(
            config,
            init=init,
            loss=loss,
            out_dir=str(Path(config.out_dir) / f"{init}_{loss}"),
        )
        rec = train(cfg)
        grid[(init, loss)] = {
            "val_map": rec.best_val_map,
            "nn_overlap": rec.nn_overlap,
        }
    return grid
