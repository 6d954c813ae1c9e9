"""Monte-Carlo, spectral, and matrix oracles."""

import math
import os

import numpy as np
import pytest

from heatinv.oracles import (BridgeSampler, TraceGrid,
                             discretized_schrodinger_1d, fit_expansion,
                             fk_diagonal, matrix_operator_family,
                             nc_taylor_matrix_check, relative_heat_trace_1d,
                             taylor_family, taylor_remainder)
from heatinv.potentials import parse_potential

GAUSSIAN = parse_potential("exp(-x1^2)", 1)


class TestBridgeSampler:
    def test_bridge_covariance(self):
        """E b(s) b(u) = s (1 - u) for s <= u, within 3 standard errors."""
        sampler = BridgeSampler(seed=3, steps=64, paths=40_000)
        blocks = [b for _, b in sampler.blocks()]
        paths = np.concatenate(blocks, axis=0)[:, :, 0]
        s_grid = np.linspace(0, 1, 65)
        for i, j in [(16, 16), (16, 48), (32, 32), (8, 56)]:
            s, u = s_grid[i], s_grid[j]
            samples = paths[:, i] * paths[:, j]
            mean = samples.mean()
            se = samples.std(ddof=1) / math.sqrt(len(samples))
            assert abs(mean - s * (1 - u)) <= 3 * se

    def test_endpoints_pinned(self):
        sampler = BridgeSampler(seed=0, steps=16, paths=1000)
        _, block = next(sampler.blocks())
        assert np.allclose(block[:, 0, :], 0.0)
        assert np.allclose(block[:, -1, :], 0.0)

    def test_stream_deterministic(self):
        a = [b.copy() for _, b in BridgeSampler(seed=5, paths=9000).blocks()]
        b = [blk.copy() for _, blk in BridgeSampler(seed=5, paths=9000).blocks()]
        for x, y in zip(a, b):
            assert np.array_equal(x, y)


class TestFeynmanKac:
    def test_zero_potential_exact(self):
        v0 = parse_potential("0 * x1", 1)
        est, se = fk_diagonal(v0, (0.0,), 0.05,
                              BridgeSampler(seed=1, paths=5000))
        assert est == pytest.approx((4 * math.pi * 0.05) ** -0.5, rel=1e-14)
        assert se == 0.0

    def test_constant_potential_exact(self):
        vc = parse_potential("3 + 0 * x1", 1)
        t = 0.1
        est, se = fk_diagonal(vc, (0.0,), t,
                              BridgeSampler(seed=1, paths=5000))
        expected = (4 * math.pi * t) ** -0.5 * math.exp(-3 * t)
        assert est == pytest.approx(expected, rel=1e-12)
        assert se <= 1e-14 * expected

    def test_thread_count_does_not_change_result(self, monkeypatch):
        sampler = BridgeSampler(seed=11, paths=12_000)
        serial = fk_diagonal(GAUSSIAN, (0.0,), 0.05, sampler)
        monkeypatch.setenv("HEATINV_THREADS", "4")
        threaded = fk_diagonal(GAUSSIAN, (0.0,), 0.05, sampler)
        assert serial == threaded

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            fk_diagonal(GAUSSIAN, (0.0,), -1.0, BridgeSampler())
        with pytest.raises(ValueError):
            fk_diagonal(GAUSSIAN, (0.0, 0.0), 0.1, BridgeSampler())


class TestRelativeTrace:
    def test_grid_refinement_consistent(self):
        t = 0.1
        coarse = relative_heat_trace_1d(GAUSSIAN, t, TraceGrid(points=2000))
        fine = relative_heat_trace_1d(GAUSSIAN, t, TraceGrid(points=4000))
        assert coarse == pytest.approx(fine, abs=5e-4)

    def test_sign_for_positive_potential(self):
        # positive potential raises all eigenvalues, lowering the trace
        assert relative_heat_trace_1d(GAUSSIAN, 0.1) < 0

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            relative_heat_trace_1d(GAUSSIAN, 0.0)
        with pytest.raises(ValueError):
            relative_heat_trace_1d(parse_potential("x1 + x2", 2), 0.1)


class TestFitExpansion:
    def test_recovers_synthetic_coefficients(self):
        coeffs = [2.0, -1.5, 0.25]
        ts = np.geomspace(0.01, 0.1, 9)
        samples = [(t, (4 * math.pi * t) ** -0.5
                    * sum(c * t ** (j + 1) for j, c in enumerate(coeffs)))
                   for t in ts]
        report = fit_expansion(samples, 1, 3)
        for j, c in enumerate(coeffs, start=1):
            assert report.coefficient(j) == pytest.approx(c, abs=1e-10)
        assert report.residual_norm < 1e-12

    def test_requires_enough_samples(self):
        with pytest.raises(ValueError):
            fit_expansion([(0.1, 1.0), (0.2, 2.0)], 1, 2)

    def test_requires_distinct_ts(self):
        with pytest.raises(ValueError):
            fit_expansion([(0.1, 1.0)] * 5, 1, 1)


class TestNcTaylor:
    def test_remainder_slope_grows_with_order(self):
        slopes = [nc_taylor_matrix_check(6, N, seed=0).slope for N in range(4)]
        assert all(b > a for a, b in zip(slopes, slopes[1:]))

    def test_cm_vanishes_when_arguments_coincide(self):
        rng = np.random.default_rng(2)
        a = rng.uniform(-1, 1, (5, 5))
        a = (a + a.T) / 2
        for m in (1, 2, 3, 4):
            assert np.linalg.norm(taylor_family(a, a, m)) <= 1e-12

    def test_c0_is_identity_and_c1_is_difference(self):
        rng = np.random.default_rng(4)
        a = rng.uniform(-1, 1, (4, 4))
        b = rng.uniform(-1, 1, (4, 4))
        assert np.allclose(taylor_family(a, b, 0), np.eye(4))
        assert np.allclose(taylor_family(a, b, 1), a - b)

    def test_remainder_exact_at_order_zero_limit(self):
        rng = np.random.default_rng(8)
        a = rng.uniform(-1, 1, (4, 4))
        r = taylor_remainder(a, a, 0.01, 0)
        assert r <= 1e-14

    def test_operator_family_matches_taylor_family(self):
        grid = np.linspace(-3, 3, 7)
        h0, h = discretized_schrodinger_1d(np.exp(-grid ** 2), 1.0)
        for m in range(6):
            c = taylor_family(-h0, -h, m)
            v = matrix_operator_family(h0, h, m)
            scale = max(np.linalg.norm(v), 1.0)
            assert np.linalg.norm(c - v) / scale <= 1e-12
