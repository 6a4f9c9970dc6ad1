import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_profile
from mxlearn.model import NetworkModel, random_model, sum_rate, uniform_profile
from mxlearn.oracle import fw_gap, solve_capacity
from mxlearn.waterfilling import (
    best_response,
    covariance_from_precision,
    iwf_step,
    swf_step,
    waterfill_gains,
    waterfill_single,
)


class TestWaterfillGains:
    def test_two_active_modes(self):
        q, mu, active = waterfill_gains([4.0, 1.0], 1.0)
        assert mu == pytest.approx(9 / 8)
        np.testing.assert_allclose(q, [7 / 8, 1 / 8])
        assert active == 2

    def test_one_inactive_mode(self):
        q, mu, active = waterfill_gains([4.0, 1.0], 0.1)
        np.testing.assert_allclose(q, [0.1, 0.0])
        assert mu == pytest.approx(0.35) and active == 1

    def test_order_preserved(self):
        q, _, _ = waterfill_gains([1.0, 4.0], 1.0)
        np.testing.assert_allclose(q, [1 / 8, 7 / 8])

    def test_zero_gains_uniform(self):
        q, _, _ = waterfill_gains([0.0, 0.0, 0.0], 3.0)
        np.testing.assert_allclose(q, 1.0)

    def test_rejects_nonpositive_power(self):
        with pytest.raises(ValueError):
            waterfill_gains([1.0], 0.0)

    @settings(max_examples=200, deadline=None)
    @given(g=st.lists(st.floats(0.0, 100.0), min_size=1, max_size=8), P=st.floats(1e-3, 100.0))
    def test_kkt(self, g, P):
        g = np.array(g)
        q, mu, _ = waterfill_gains(g, P)
        assert q.sum() == pytest.approx(P, rel=1e-10)
        assert np.all(q >= 0)
        g = np.where(g >= np.finfo(float).tiny, g, 0.0)
        if not np.any(g > 0):
            return
        on = q > 0
        np.testing.assert_allclose(q[on], mu - 1 / g[on], atol=1e-10 * max(mu, 1))
        off = ~on & (g > 0)
        assert np.all(mu <= 1 / g[off] + 1e-10 * max(mu, 1))


class TestWaterfillSingle:
    def test_isotropic_channel(self):
        res = waterfill_single(np.sqrt(2.0) * np.eye(3), 1.5)
        np.testing.assert_allclose(res.Q, 0.5 * np.eye(3), atol=1e-14)

    def test_zero_channel(self):
        np.testing.assert_allclose(waterfill_single(np.zeros((2, 3)), 3.0).Q, np.eye(3))

    def test_trace_and_psd(self, rng):
        H = rng.standard_normal((4, 3)) + 1j * rng.standard_normal((4, 3))
        res = waterfill_single(H, 2.0)
        assert np.trace(res.Q).real == pytest.approx(2.0, abs=1e-10)
        assert np.linalg.eigvalsh(res.Q)[0] >= -1e-12

    def test_single_user_optimum(self, rng):
        m = random_model(rng, 1, 3, 3, P=2.0)
        Q = iwf_step(m, uniform_profile(m), 0)
        assert fw_gap(m, Q) < 1e-10
        assert sum_rate(m, Q) == pytest.approx(solve_capacity(m, method="mxl").rate, abs=1e-8)


class TestIterative:
    def test_monotone_and_converges(self, rng):
        m = random_model(rng, 3, 4, [2, 3, 2], P=[1.0, 2.0, 0.5])
        R_max = solve_capacity(m, method="mxl").rate
        Q = uniform_profile(m)
        R = sum_rate(m, Q)
        for n in range(3000):
            Q = iwf_step(m, Q, n % 3)
            R_new = sum_rate(m, Q)
            assert R_new >= R - 1e-10
            done = abs(R_new - R) < 1e-9 and n > 3
            R = R_new
            if done:
                break
        assert R == pytest.approx(R_max, rel=1e-6)

    def test_fixed_point(self, rng, small_model):
        Q = solve_capacity(small_model).Q
        for k in range(small_model.K):
            np.testing.assert_allclose(iwf_step(small_model, Q, k)[k], Q[k], atol=1e-6)

    def test_only_one_user_changes(self, rng, small_model):
        Q = random_profile(rng, small_model)
        out = iwf_step(small_model, Q, 1)
        assert out[0] is Q[0] and out[2] is Q[2]

    def test_best_response_with_exact_covariance(self, rng, small_model):
        from mxlearn.model import aggregate_covariance

        Q = random_profile(rng, small_model)
        W = aggregate_covariance(small_model, Q)
        np.testing.assert_allclose(best_response(small_model, Q, 0, W), best_response(small_model, Q, 0), atol=1e-12)


class TestSimultaneous:
    def test_single_user_matches_iwf(self, rng):
        m = random_model(rng, 1, 3, 2)
        Q = random_profile(rng, m)
        np.testing.assert_allclose(swf_step(m, Q)[0], iwf_step(m, Q, 0)[0])

    def test_nash_fixed_point(self, small_model):
        Q = solve_capacity(small_model).Q
        for a, b in zip(swf_step(small_model, Q), Q):
            np.testing.assert_allclose(a, b, atol=1e-6)
        assert fw_gap(small_model, Q) <= 1e-6

    def test_feasible(self, rng, small_model):
        Q = uniform_profile(small_model)
        for _ in range(20):
            Q = swf_step(small_model, Q)
            for q, p in zip(Q, small_model.P):
                assert np.trace(q).real == pytest.approx(p, rel=1e-10)


def test_covariance_from_precision_clips(rng):
    W = np.diag([1.0, 4.0])
    np.testing.assert_allclose(covariance_from_precision(np.linalg.inv(W)), W, atol=1e-12)
    np.testing.assert_allclose(covariance_from_precision(np.diag([2.0, -1.0])), np.diag([1.0, 1e6]))
