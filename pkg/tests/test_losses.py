import math

import mpmath
import numpy as np
import pytest

from hoihead.errors import ConfigError
from hoihead.losses import (
    ClassStats,
    bce_grad,
    bce_loss,
    focal_grad,
    focal_loss,
    gradcheck,
    lse_sign_grad,
    lse_sign_loss,
    weighted_bce_grad,
    weighted_bce_loss,
)


def central_diff(loss_fn, s, y, eps):
    """Test-local finite-difference oracle, independent of losses.gradcheck."""
    g = np.zeros_like(s)
    for i in range(len(s)):
        sp, sm = s.copy(), s.copy()
        sp[i] += eps
        sm[i] -= eps
        g[i] = (loss_fn(sp, y) - loss_fn(sm, y)) / (2 * eps)
    return g


def rel_err(analytic, numeric):
    return np.max(np.abs(analytic - numeric)) / max(np.max(np.abs(numeric)), 1e-12)


def random_instance(rng, C_max=16, scale=3.0):
    C = int(rng.integers(1, C_max + 1))
    s = rng.normal(scale=scale, size=C)
    y = rng.choice([-1.0, 1.0], size=C)
    return s, y


class TestLseSignValues:
    def test_single_class_at_zero(self):
        assert lse_sign_loss(np.array([0.0]), np.array([1])) == pytest.approx(math.log(2))

    def test_all_zero_logits_closed_form(self):
        rng = np.random.default_rng(0)
        y = rng.choice([-1, 1], size=600)
        assert lse_sign_loss(np.zeros(600), y) == math.log(601)

    def test_three_class_instance(self):
        # log(1 + e^-1 + e^-0.5 + e^2), evaluated independently
        loss = lse_sign_loss(np.array([1.0, -0.5, 2.0]), np.array([1, -1, -1]))
        assert loss == pytest.approx(2.2368155424308167, abs=1e-12)

    def test_mpmath_agreement(self):
        # shifted-form result must match a 50-digit naive evaluation
        rng = np.random.default_rng(1)
        mpmath.mp.dps = 50
        for scale in (1.0, 100.0, 1e4):
            s, y = random_instance(rng, scale=scale)
            expected = float(mpmath.log(1 + sum(mpmath.exp(-yi * si) for yi, si in zip(y, s))))
            assert lse_sign_loss(s, y) == pytest.approx(expected, rel=1e-12)

    def test_length_mismatch(self):
        with pytest.raises(ConfigError):
            lse_sign_loss(np.zeros(3), np.ones(2))

    def test_bad_label_value(self):
        with pytest.raises(ConfigError):
            lse_sign_loss(np.zeros(2), np.array([1, 0]))


class TestLseSignGrad:
    def test_single_class_at_zero(self):
        np.testing.assert_allclose(lse_sign_grad(np.array([0.0]), np.array([1])), [-0.5])

    def test_magnitude_identity(self):
        # sum|g| = 1 - exp(-loss): the softmax normalization of the gradient
        rng = np.random.default_rng(2)
        for _ in range(500):
            s, y = random_instance(rng)
            g = lse_sign_grad(s, y)
            loss = lse_sign_loss(s, y)
            assert abs(np.sum(np.abs(g)) - (1 - np.exp(-loss))) < 1e-9

    def test_sign_opposes_label(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            s, y = random_instance(rng)
            g = lse_sign_grad(s, y)
            assert np.all(np.sign(g) == -y)

    def test_total_magnitude_below_one(self):
        rng = np.random.default_rng(4)
        for _ in range(100):
            s, y = random_instance(rng)
            assert np.sum(np.abs(lse_sign_grad(s, y))) < 1.0
        # at extreme logits the independently rounded quotients can land a
        # few ulps above 1; the 1e-9 softmax identity still holds there
        for _ in range(100):
            s, y = random_instance(rng, scale=50.0)
            assert np.sum(np.abs(lse_sign_grad(s, y))) < 1.0 + 8 * np.finfo(float).eps

    def test_finite_differences(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            s, y = random_instance(rng)
            assert rel_err(lse_sign_grad(s, y), central_diff(lse_sign_loss, s, y, 1e-5)) < 1e-6


class TestLseSignProperties:
    def test_nonnegative(self):
        rng = np.random.default_rng(6)
        for _ in range(200):
            s, y = random_instance(rng, scale=30.0)
            assert lse_sign_loss(s, y) >= 0.0

    def test_vanishes_when_all_margins_large(self):
        y = np.array([1.0, -1.0, 1.0])
        s = y * 1e4
        assert lse_sign_loss(s, y) < 1e-12

    def test_sign_symmetry(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            s, y = random_instance(rng)
            assert lse_sign_loss(s, y) == lse_sign_loss(-s, -y)

    def test_permutation_invariance(self):
        rng = np.random.default_rng(8)
        s, y = rng.normal(size=10), rng.choice([-1.0, 1.0], size=10)
        perm = rng.permutation(10)
        assert lse_sign_loss(s[perm], y[perm]) == pytest.approx(lse_sign_loss(s, y), rel=1e-14)

    def test_monotonic_in_logits(self):
        rng = np.random.default_rng(9)
        for _ in range(50):
            s, y = random_instance(rng, C_max=8)
            base = lse_sign_loss(s, y)
            for i in range(len(s)):
                bumped = s.copy()
                bumped[i] += 0.1 * y[i]  # move toward the label
                assert lse_sign_loss(bumped, y) < base

    def test_extreme_logits_finite(self):
        rng = np.random.default_rng(10)
        for _ in range(50):
            C = int(rng.integers(1, 17))
            s = rng.choice([-1e4, 1e4], size=C)
            y = rng.choice([-1.0, 1.0], size=C)
            loss = lse_sign_loss(s, y)
            assert np.isfinite(loss)
            g = lse_sign_grad(s, y)
            assert np.all(np.isfinite(g))

    def test_batched_matches_rows(self):
        rng = np.random.default_rng(11)
        S = rng.normal(size=(5, 7), scale=10)
        Y = rng.choice([-1.0, 1.0], size=(5, 7))
        batched = lse_sign_loss(S, Y)
        grads = lse_sign_grad(S, Y)
        for n in range(5):
            assert batched[n] == lse_sign_loss(S[n], Y[n])
            np.testing.assert_array_equal(grads[n], lse_sign_grad(S[n], Y[n]))


class TestBce:
    def test_single_class_at_zero(self):
        assert bce_loss(np.array([0.0]), np.array([1])) == pytest.approx(math.log(2))

    def test_saturated_positive_term_vanishes(self):
        assert bce_loss(np.array([100.0]), np.array([1])) < 1e-40

    def test_finite_differences(self):
        rng = np.random.default_rng(12)
        for _ in range(100):
            s, y = random_instance(rng)
            assert rel_err(bce_grad(s, y), central_diff(bce_loss, s, y, 1e-5)) < 1e-6


class TestWeightedBce:
    def test_positive_term_ratio(self):
        stats = ClassStats(pos=np.array([1]), neg=np.array([3]))
        s, y = np.array([-0.7]), np.array([1])
        assert weighted_bce_loss(s, y, stats) == pytest.approx(3 * bce_loss(s, y))

    def test_balanced_class_reduces_to_bce(self):
        stats = ClassStats(pos=np.array([5, 8]), neg=np.array([5, 8]))
        rng = np.random.default_rng(13)
        for _ in range(20):
            s = rng.normal(size=2)
            y = rng.choice([-1.0, 1.0], size=2)
            assert weighted_bce_loss(s, y, stats) == pytest.approx(bce_loss(s, y), rel=1e-14)

    def test_zero_positive_class_weight_one(self):
        stats = ClassStats(pos=np.array([0]), neg=np.array([10]))
        s, y = np.array([0.3]), np.array([1])
        assert weighted_bce_loss(s, y, stats) == pytest.approx(bce_loss(s, y))

    def test_finite_differences(self):
        rng = np.random.default_rng(14)
        for _ in range(100):
            s, y = random_instance(rng)
            stats = ClassStats(
                pos=rng.integers(0, 20, size=len(s)), neg=rng.integers(1, 20, size=len(s))
            )
            loss = lambda ss, yy: weighted_bce_loss(ss, yy, stats)
            assert rel_err(weighted_bce_grad(s, y, stats), central_diff(loss, s, y, 1e-5)) < 1e-5

    def test_stats_size_mismatch(self):
        stats = ClassStats(pos=np.array([1]), neg=np.array([1]))
        with pytest.raises(ConfigError):
            weighted_bce_loss(np.zeros(2), np.array([1, -1]), stats)


class TestFocal:
    def test_positive_class_at_zero(self):
        # -0.25 * (0.5)^2 * log(0.5) for the single class
        assert focal_loss(np.array([0.0]), np.array([1])) == pytest.approx(
            0.04332169878499658, abs=1e-15
        )

    def test_collapses_to_half_bce(self):
        rng = np.random.default_rng(15)
        for _ in range(20):
            s, y = random_instance(rng)
            collapsed = focal_loss(s, y, gamma_f=0.0, alpha=0.5)
            assert collapsed == pytest.approx(0.5 * bce_loss(s, y), rel=1e-12)

    def test_finite_differences(self):
        rng = np.random.default_rng(16)
        for _ in range(100):
            s, y = random_instance(rng)
            loss = lambda ss, yy: focal_loss(ss, yy)
            assert rel_err(focal_grad(s, y), central_diff(loss, s, y, 1e-5)) < 1e-5


class TestClassStats:
    def test_from_labels(self):
        labels = np.array([[1, -1], [1, 1], [-1, 1]])
        stats = ClassStats.from_labels(labels)
        np.testing.assert_array_equal(stats.pos, [2, 2])
        np.testing.assert_array_equal(stats.neg, [1, 1])
        assert np.all(stats.pos + stats.neg == 3)

    def test_rejects_bad_values(self):
        with pytest.raises(ConfigError):
            ClassStats.from_labels(np.array([[1, 0]]))


class TestGradcheckOp:
    def test_lse_sign_clean(self):
        report = gradcheck("lse-sign", trials=100, C_max=16, epsilon=1e-5, seed=0)
        assert report["max_rel_err"] < 1e-6

    def test_all_baselines_clean(self):
        for kind in ("bce", "wbce", "focal"):
            assert gradcheck(kind, trials=50, seed=1)["max_rel_err"] < 1e-5

    def test_deterministic(self):
        a = gradcheck("lse-sign", trials=10, seed=3)
        b = gradcheck("lse-sign", trials=10, seed=3)
        assert a == b

    def test_zero_trials_rejected(self):
        with pytest.raises(ConfigError):
            gradcheck("lse-sign", trials=0)

    def test_unknown_loss(self):
        with pytest.raises(ConfigError):
            gradcheck("hinge")
