import numpy as np
import pytest

from hoihead.errors import ConfigError
from hoihead.optim import AdamState, Schedule, adam_step, lr_at


class TestAdamStep:
    def test_first_step_hand_computed(self):
        W = np.array([[0.0]])
        state = AdamState.zeros(W.shape)
        W1, state = adam_step(W, np.array([[1.0]]), state, lr=0.1)
        # bias correction makes m_hat = v_hat = 1 on the first step
        assert W1[0, 0] == pytest.approx(-0.1 / (1 + 1e-8), abs=1e-15)
        assert state.t == 1

    def test_zero_grad_is_fixed_point(self):
        rng = np.random.default_rng(0)
        W = rng.normal(size=(3, 4))
        state = AdamState.zeros(W.shape)
        current = W
        for _ in range(20):
            current, state = adam_step(current, np.zeros_like(W), state, lr=0.5)
        np.testing.assert_array_equal(current, W)

    def test_deterministic_trajectories(self):
        def run():
            rng = np.random.default_rng(1)
            W = rng.normal(size=(4, 4))
            state = AdamState.zeros(W.shape)
            for _ in range(50):
                W, state = adam_step(W, rng.normal(size=(4, 4)), state, lr=1e-2)
            return W

        np.testing.assert_array_equal(run(), run())

    def test_gradient_scale_invariance_at_convergence(self):
        # constant gradients g and 10g follow the same sign direction
        def updates(scale):
            W = np.zeros((2, 2))
            state = AdamState.zeros(W.shape)
            g = scale * np.array([[1.0, -2.0], [0.5, 3.0]])
            for _ in range(1000):
                W, state = adam_step(W, g, state, lr=1e-3)
            return W

        np.testing.assert_allclose(updates(1.0), updates(10.0), atol=1e-6)

    def test_moments_accumulate(self):
        state = AdamState.zeros((1, 1))
        _, state = adam_step(np.zeros((1, 1)), np.array([[2.0]]), state, lr=0.1)
        assert state.m[0, 0] == pytest.approx(0.2)
        assert state.v[0, 0] == pytest.approx(0.004)
        assert np.all(state.v >= 0)

    def test_shape_mismatch(self):
        state = AdamState.zeros((2, 2))
        with pytest.raises(ConfigError):
            adam_step(np.zeros((2, 2)), np.zeros((2, 3)), state, lr=0.1)

    def test_bad_lr(self):
        state = AdamState.zeros((1, 1))
        with pytest.raises(ConfigError):
            adam_step(np.zeros((1, 1)), np.zeros((1, 1)), state, lr=0.0)


class TestSchedule:
    def test_step_zero_is_base(self):
        sched = Schedule(base_lr=1e-4, steps_per_epoch=10)
        assert lr_at(sched, 0) == 1e-4

    def test_halfway_is_midpoint(self):
        sched = Schedule(base_lr=1e-4, steps_per_epoch=10, min_lr=2e-5, restart_period=5)
        assert lr_at(sched, 25) == pytest.approx((1e-4 + 2e-5) / 2)

    def test_decays_then_restarts(self):
        sched = Schedule(base_lr=1e-4, steps_per_epoch=20, restart_period=5)
        period = 100
        assert lr_at(sched, period - 1) < 1e-6  # nearly decayed away
        assert lr_at(sched, period) == 1e-4     # warm restart

    def test_periodic(self):
        sched = Schedule(base_lr=3e-3, steps_per_epoch=7, min_lr=1e-5, restart_period=5)
        period = 35
        for step in range(40):
            assert lr_at(sched, step) == lr_at(sched, step + period)

    def test_bounds(self):
        sched = Schedule(base_lr=1.0, steps_per_epoch=13, min_lr=0.125, restart_period=3)
        lrs = [lr_at(sched, k) for k in range(200)]
        assert min(lrs) >= 0.125
        assert max(lrs) <= 1.0

    def test_invalid_bounds(self):
        with pytest.raises(ConfigError):
            Schedule(base_lr=1e-4, steps_per_epoch=10, min_lr=2e-4)
        with pytest.raises(ConfigError):
            Schedule(base_lr=0.0, steps_per_epoch=10)
        with pytest.raises(ConfigError):
            lr_at(Schedule(base_lr=1.0, steps_per_epoch=1), -1)
