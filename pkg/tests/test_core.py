import math

import numpy as np
import pytest

from mixedgrad.core import (EpochState, MixedGradConfig, anchor_gradient,
                            epoch_objective, epoch_subproblem_optimum,
                            inner_step, run, run_epoch, shrink_schedule,
                            theory_params, vr_gradient)
from mixedgrad.geometry import EpochDomain
from mixedgrad.losses import (LEAST_SQUARES, Dataset, ProblemInstance,
                              full_objective, loss_grad, mean_gradient)
from mixedgrad.oracle import OracleCounters, SeededSampler


def make_instance(X, y, radius=1.0):
    return ProblemInstance.create(Dataset(np.asarray(X, float),
                                          np.asarray(y, float)),
                                  LEAST_SQUARES, radius)


def random_instance(n=12, d=4, seed=0, radius=1.0):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, d))
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    return make_instance(X, rng.standard_normal(n), radius)


class TestAnchorGradient:
    def test_zero_anchor(self):
        inst = random_instance()
        c = OracleCounters()
        g = anchor_gradient(inst, np.zeros(4), 3.0, c)
        np.testing.assert_array_equal(g, mean_gradient(inst, np.zeros(4)))
        assert c.full_calls == 1

    def test_zero_lambda(self):
        inst = random_instance()
        w_bar = np.full(4, 0.1)
        g = anchor_gradient(inst, w_bar, 0.0, OracleCounters())
        np.testing.assert_array_equal(g, mean_gradient(inst, w_bar))

    def test_two_point_toy(self):
        # x=(1) y=1 and x=(1) y=-1, anchor=(1), lam=1:
        # grads are 0 and 4, mean 2, plus lam*anchor -> 3
        inst = make_instance([[1.0], [1.0]], [1.0, -1.0], radius=2.0)
        g = anchor_gradient(inst, np.array([1.0]), 1.0, OracleCounters())
        np.testing.assert_allclose(g, [3.0], atol=1e-15)


class TestVrGradient:
    def test_bitwise_anchor_determinism(self):
        inst = random_instance(seed=5)
        anchor = np.array([0.2, -0.1, 0.05, 0.3])
        g_k = anchor_gradient(inst, anchor, 0.7, OracleCounters())
        for i in range(inst.n):
            g = vr_gradient(inst, i, np.zeros(4), anchor, g_k)
            assert np.array_equal(g, g_k)

    def test_single_example_collapse(self):
        inst = make_instance([[1.0, 2.0]], [0.5], radius=2.0)
        anchor = np.array([0.1, 0.2])
        lam = 0.3
        g_k = anchor_gradient(inst, anchor, lam, OracleCounters())
        w = np.array([0.05, -0.1])
        expected = lam * anchor + loss_grad(inst, 0, w + anchor)
        np.testing.assert_allclose(vr_gradient(inst, 0, w, anchor, g_k),
                                   expected, atol=1e-12)

    def test_unbiasedness(self):
        inst = random_instance(n=20, seed=11)
        rng = np.random.default_rng(4)
        anchor = rng.uniform(-0.2, 0.2, 4)
        lam = 0.5
        g_k = anchor_gradient(inst, anchor, lam, OracleCounters())
        for _ in range(50):
            w = rng.uniform(-0.3, 0.3, 4)
            mean_vr = sum(vr_gradient(inst, i, w, anchor, g_k) + lam * w
                          for i in range(inst.n)) / inst.n
            expected = (lam * w + lam * anchor
                        + mean_gradient(inst, w + anchor))
            np.testing.assert_allclose(mean_vr, expected, atol=1e-12)


class TestInnerStep:
    def test_zero_combined_gradient(self):
        dom = EpochDomain(np.zeros(2), 10.0, 10.0)
        w = np.array([0.1, 0.0])
        g = -0.5 * w  # lam=0.5 makes lam*w + g = 0
        np.testing.assert_allclose(inner_step(w, g, 0.5, 0.3, dom), w,
                                   atol=1e-15)

    def test_zero_step_size(self):
        dom = EpochDomain(np.zeros(2), 10.0, 10.0)
        w = np.array([0.1, -0.2])
        np.testing.assert_array_equal(inner_step(w, np.ones(2), 1.0, 0.0, dom), w)

    def test_interior_arithmetic(self):
        dom = EpochDomain(np.zeros(2), 100.0, 100.0)
        out = inner_step(np.array([0.1, 0.0]), np.array([0.2, 0.0]),
                         0.0, 0.5, dom)
        np.testing.assert_allclose(out, np.zeros(2), atol=1e-15)

    def test_nonfinite_gradient_raises(self):
        from mixedgrad.core import DivergenceError
        dom = EpochDomain(np.zeros(2), 1.0, 1.0)
        with pytest.raises(DivergenceError):
            inner_step(np.zeros(2), np.array([np.nan, 0.0]), 1.0, 0.1, dom)


class TestRunEpoch:
    def test_zero_inner_iters_averages_initial_zero(self):
        inst = random_instance()
        state = EpochState(1, np.zeros(4), 1.0, 1.0, 0.1, 0,
                           anchor_gradient(inst, np.zeros(4), 1.0,
                                           OracleCounters()))
        w_tilde, _ = run_epoch(inst, state, SeededSampler(0), OracleCounters())
        np.testing.assert_array_equal(w_tilde, np.zeros(4))

    def test_huge_lambda_pins_average_near_zero(self):
        inst = random_instance()
        c = OracleCounters()
        lam = 1e6
        state = EpochState(1, np.zeros(4), 1.0, lam, 1e-7, 200,
                           np.zeros(4))
        w_tilde, _ = run_epoch(inst, state, SeededSampler(1), c)
        assert np.linalg.norm(w_tilde) <= 1e-3

    def test_deterministic_quadratic_reaches_subproblem_optimum(self):
        # n=1: the stochastic gradient is exact, so the epoch is plain
        # projected gradient descent on the regularized 1-D quadratic
        a = 0.8
        inst = make_instance([[1.0]], [a], radius=5.0)
        lam, eta, T, delta = 1.0, 0.1, 2000, 0.5
        c = OracleCounters()
        g_k = anchor_gradient(inst, np.zeros(1), lam, c)
        state = EpochState(1, np.zeros(1), delta, lam, eta, T, g_k)
        w_tilde, _ = run_epoch(inst, state, SeededSampler(0), c)
        w_opt = min(2 * a / (lam + 2), delta)  # closed form, clamped
        assert abs(w_tilde[0] - w_opt) <= 10 * eta
        assert np.linalg.norm(w_tilde) <= delta + 1e-12


class TestShrinkSchedule:
    def test_geometric_sequences(self):
        state = EpochState(1, np.zeros(2), 1.0, 8.0, 0.4, 10, np.zeros(2))
        s2 = shrink_schedule(state, 2.0, np.zeros(2))
        s3 = shrink_schedule(s2, 2.0, np.zeros(2))
        assert (s2.delta, s3.delta) == (0.5, 0.25)
        assert (s2.inner_iters, s3.inner_iters) == (40, 160)
        assert (s2.lam, s3.lam) == (4.0, 2.0)
        assert (s2.eta, s3.eta) == (0.2, 0.1)
        assert s3.epoch_index == 3

    def test_anchor_shift(self):
        state = EpochState(1, np.array([0.1, 0.2]), 1.0, 1.0, 0.1, 10,
                           np.zeros(2))
        s2 = shrink_schedule(state, 2.0, np.array([0.0, 0.0]))
        np.testing.assert_array_equal(s2.anchor, state.anchor)
        s2 = shrink_schedule(state, 2.0, np.array([0.05, -0.1]))
        np.testing.assert_allclose(s2.anchor, [0.15, 0.1], atol=1e-15)


class TestTheoryParams:
    def test_reference_values(self):
        cfg = theory_params(1.0, 1.0, math.exp(-4.5), 5)
        assert cfg.gamma == 2.0
        assert cfg.lambda1 == 16.0
        assert cfg.delta1 == 1.0
        assert cfg.t1 == 1833
        assert cfg.eta1 == pytest.approx(1.0 / (2.0 * math.sqrt(3 * 1833)),
                                         rel=1e-15)

    def test_lambda_beta_ratio(self):
        for beta in (0.5, 2.0, 7.0):
            assert theory_params(beta, 1.0, 1e-3, 4).lambda1 == 16.0 * beta

    def test_rejects_large_failure_probability(self):
        with pytest.raises(ValueError):
            theory_params(1.0, 1.0, 0.1, 5)


class TestRun:
    def test_oracle_accounting(self):
        inst = random_instance(n=8, d=3, seed=2)
        cfg = MixedGradConfig(eta1=0.05, delta1=1.0, t1=10, epochs=3,
                              lambda1=1.0)
        res = run(inst, cfg, seed=0)
        assert res.counters.full_calls == 3
        assert res.counters.stochastic_calls == 10 * (4 ** 3 - 1) // 3  # 210

    def test_fixed_point_at_optimum(self):
        # all-zero labels make w=0 a global minimizer with zero gradients
        rng = np.random.default_rng(3)
        inst = make_instance(rng.standard_normal((6, 3)), np.zeros(6))
        cfg = MixedGradConfig(eta1=0.1, delta1=1.0, t1=5, epochs=3,
                              lambda1=0.5)
        res = run(inst, cfg, seed=0)
        np.testing.assert_array_equal(res.point, np.zeros(3))

    def test_monotone_error_decay_deterministic(self):
        inst = make_instance([[1.0]], [0.5], radius=1.0)
        cfg = MixedGradConfig(eta1=0.2, delta1=1.0, t1=50, epochs=5,
                              lambda1=0.5)
        res = run(inst, cfg, seed=0)
        errs = [full_objective(inst, np.zeros(1))] \
            + [s.objective_after for s in res.epoch_summaries]
        assert all(e2 < e1 + 1e-15 for e1, e2 in zip(errs, errs[1:]))

    def test_anchors_stay_in_ball(self):
        inst = random_instance(n=10, d=3, seed=8, radius=0.8)
        cfg = MixedGradConfig(eta1=0.1, delta1=0.8, t1=20, epochs=4,
                              lambda1=1.0)
        res = run(inst, cfg, seed=5)
        for s in res.epoch_summaries:
            assert np.linalg.norm(s.anchor_after) <= 0.8 + 1e-9

    def test_bounded_step_diagnostic(self):
        inst = random_instance(n=10, d=3, seed=8)
        beta = inst.smoothness
        cfg = MixedGradConfig(eta1=0.1, delta1=1.0, t1=30, epochs=4,
                              lambda1=beta)
        res = run(inst, cfg, seed=1)
        for s in res.epoch_summaries:
            assert s.lam <= 2 * beta
            assert s.max_step_norm_sq <= 6 * beta ** 2 * s.delta ** 2 + 1e-6

    def test_trace_counters_nondecreasing(self):
        inst = random_instance(n=10, d=3, seed=8)
        cfg = MixedGradConfig(eta1=0.1, delta1=1.0, t1=30, epochs=3,
                              lambda1=1.0, checkpoint_stride=7)
        res = run(inst, cfg, seed=1)
        stoch = [r.stoch_calls for r in res.trace]
        full = [r.full_calls for r in res.trace]
        assert stoch == sorted(stoch)
        assert full == sorted(full)

    def test_invalid_config_rejected(self):
        with pytest.raises(ValueError):
            MixedGradConfig(eta1=0.1, delta1=1.0, t1=10, epochs=3,
                            lambda1=1.0, gamma=1.0)
        with pytest.raises(ValueError):
            MixedGradConfig(eta1=-0.1, delta1=1.0, t1=10, epochs=3,
                            lambda1=1.0)


class TestEpochSubproblem:
    def test_matches_closed_form_quadratic(self):
        a = 0.6
        inst = make_instance([[1.0]], [a], radius=5.0)
        lam = 0.8
        w = epoch_subproblem_optimum(inst, np.zeros(1), lam, 0.25)
        assert w[0] == pytest.approx(min(2 * a / (lam + 2), 0.25), abs=1e-9)

    def test_objective_helper(self):
        inst = make_instance([[1.0]], [0.6], radius=5.0)
        w = np.array([0.2])
        anchor = np.array([0.1])
        lam = 0.5
        expected = (0.5 * lam * 0.04 + lam * 0.02
                    + full_objective(inst, w + anchor))
        assert epoch_objective(inst, anchor, lam, w) == pytest.approx(expected)
