"""Adam without weight decay, plus a cosine schedule with warm restarts."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError


@dataclass
class AdamState:
    """First/second moment accumulators and the step counter."""

    m: np.ndarray
    v: np.ndarray
    t: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    @classmethod
    def zeros(cls, shape) -> "AdamState":
        return cls(m=np.zeros(shape), v=np.zeros(shape))


def adam_step(W: np.ndarray, grad: np.ndarray, state: AdamState, lr: float):
    """One bias-corrected Adam update; no weight-decay term.

    Mutates ``state`` in place and returns ``(W_new, state)``.
    """
    if W.shape != grad.shape or W.shape != state.m.shape:
        raise ConfigError(
            f"shape mismatch: W {W.shape}, grad {grad.shape}, state {state.m.shape}"
        )
    if lr <= 0:
        raise ConfigError(f"learning rate must be positive, got {lr}")
    state.t += 1
    state.m = state.beta1 * state.m + (1.0 - state.beta1) * grad
    state.v = state.beta2 * state.v + (1.0 - state.beta2) * grad**2
    m_hat = state.m / (1.0 - state.beta1**state.t)
    v_hat = state.v / (1.0 - state.beta2**state.t)
    return W - lr * m_hat / (np.sqrt(v_hat) + state.eps), state


@dataclass(frozen=True)
class Schedule:
    """Cosine decay from base_lr to min_lr, restarting every restart_period epochs."""

    base_lr: float
    steps_per_epoch: int
    min_lr: float = 0.0
    restart_period: int = 5

    def __post_init__(self):
        if self.base_lr <= 0:
            raise ConfigError(f"base_lr must be positive, got {self.base_lr}")
        if not 0 <= self.min_lr <= self.base_lr:
            raise ConfigError(f"need 0 <= min_lr <= base_lr, got {self.min_lr}")
        if self.steps_per_epoch < 1 or self.restart_period < 1:
            raise ConfigError("steps_per_epoch and restart_period must be >= 1")


def lr_at(schedule: Schedule, global_step: int) -> float:
    """Learning rate at an optimizer step (0-based, evaluated per step)."""
    if global_step < 0:
        raise ConfigError(f"global_step must be >= 0, got {global_step}")
    period = schedule.restart_period * schedule.steps_per_epoch
    u = (global_step % period) / period
    return schedule.min_lr + 0.5 * (schedule.base_lr - schedule.min_lr) * (
        1.0 + math.cos(math.pi * u)
    )
