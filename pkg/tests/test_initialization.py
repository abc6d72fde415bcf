"""Tests for spectral initialization and the power iteration it rides on."""

import numpy as np
import pytest

from convpr import (
    ConvolutionalMeasurement,
    DegenerateOperator,
    InvalidDimension,
    InvalidInput,
    InvalidParameter,
    apply_Y,
    build_circulant_dense,
    complex_gaussian,
    dense_leading_eigenpair,
    dist_mod_phase,
    norm_estimate,
    power_method,
    spectral_init,
)


def hermitian_with_gap(rng, n, top=10.0, second=7.0):
    """Random Hermitian PSD matrix with a controlled top eigengap."""
    q, _ = np.linalg.qr(complex_gaussian(rng, (n, n)))
    eigs = np.linspace(0.1, second, n)
    eigs[-1] = top
    return (q * eigs) @ q.conj().T


class TestPowerMethod:
    def test_matches_dense_eigensolver(self):
        rng = np.random.default_rng(11)
        for n in (4, 9, 17):
            mat = hermitian_with_gap(rng, n)
            vec_ref, val_ref = dense_leading_eigenpair(mat)
            res = power_method(lambda v: mat @ v, n, max_iters=5000,
                               rel_tol=1e-14, rng=rng)
            assert abs(res.eigval - val_ref) <= 1e-8 * abs(val_ref)
            # eigenvectors agree modulo a unit phase
            assert abs(abs(np.vdot(vec_ref, res.eigvec)) - 1.0) < 1e-6

    def test_rayleigh_history_nondecreasing_for_psd(self):
        rng = np.random.default_rng(3)
        mat = hermitian_with_gap(rng, 12)
        res = power_method(lambda v: mat @ v, 12, max_iters=200,
                           rel_tol=0.0, rng=rng)
        hist = np.asarray(res.rayleigh_history)
        assert len(hist) == res.iterations
        assert np.all(np.diff(hist) >= -1e-10 * np.abs(hist[:-1]))

    def test_eigvec_unit_norm(self):
        rng = np.random.default_rng(5)
        mat = hermitian_with_gap(rng, 8)
        res = power_method(lambda v: mat @ v, 8, rng=rng)
        assert abs(np.linalg.norm(res.eigvec) - 1.0) < 1e-12

    def test_early_stop_on_rel_tol(self):
        rng = np.random.default_rng(7)
        mat = hermitian_with_gap(rng, 10, top=50.0, second=1.0)
        res = power_method(lambda v: mat @ v, 10, max_iters=100,
                           rel_tol=1e-6, rng=rng)
        assert res.iterations < 100

    def test_deterministic_for_seed_and_for_start(self):
        mat = hermitian_with_gap(np.random.default_rng(0), 6)
        a = power_method(lambda v: mat @ v, 6, rng=123)
        b = power_method(lambda v: mat @ v, 6, rng=123)
        assert np.array_equal(a.eigvec, b.eigvec)
        assert a.rayleigh_history == b.rayleigh_history

        start = np.arange(1, 7).astype(complex)
        c = power_method(lambda v: mat @ v, 6, start=start)
        d = power_method(lambda v: mat @ v, 6, start=start)
        assert np.array_equal(c.eigvec, d.eigvec)
        # the start array is not mutated
        assert np.array_equal(start, np.arange(1, 7).astype(complex))

    def test_zero_operator_raises(self):
        with pytest.raises(DegenerateOperator):
            power_method(lambda v: np.zeros_like(v), 5, rng=0)

    def test_nonfinite_operator_raises(self):
        with pytest.raises(DegenerateOperator):
            power_method(lambda v: v * np.nan, 5, rng=0)

    def test_shape_changing_operator_rejected(self):
        with pytest.raises(InvalidDimension):
            power_method(lambda v: v[:-1], 5, rng=0)

    def test_argument_validation(self):
        op = lambda v: v
        with pytest.raises(InvalidDimension):
            power_method(op, 0, rng=0)
        with pytest.raises(InvalidParameter):
            power_method(op, 4, max_iters=0, rng=0)
        with pytest.raises(InvalidParameter):
            power_method(op, 4, rel_tol=-1.0, rng=0)
        with pytest.raises(InvalidDimension):
            power_method(op, 4, start=np.ones(3, dtype=complex))
        with pytest.raises(InvalidInput):
            power_method(op, 4, start=np.zeros(4, dtype=complex))


class TestApplyY:
    def test_matches_dense_quadratic_form(self):
        rng = np.random.default_rng(21)
        for n, m in ((5, 12), (8, 8), (6, 29)):
            a = complex_gaussian(rng, m)
            model = ConvolutionalMeasurement(a, n)
            dense = build_circulant_dense(a, n).matrix
            y = np.abs(dense @ complex_gaussian(rng, n))
            Y = dense.conj().T @ np.diag(y**2) @ dense / m
            for _ in range(3):
                v = complex_gaussian(rng, n)
                assert np.allclose(apply_Y(model, y, v), Y @ v, atol=1e-12)

    def test_length_mismatch_rejected(self):
        rng = np.random.default_rng(2)
        model = ConvolutionalMeasurement(complex_gaussian(rng, 8), 4)
        with pytest.raises(InvalidDimension):
            apply_Y(model, np.ones(5), np.ones(4, dtype=complex))


class TestSpectralInit:
    def test_close_to_truth_when_oversampled(self):
        rng = np.random.default_rng(42)
        n, m = 16, 1024
        x = complex_gaussian(rng, n)
        x /= np.linalg.norm(x)
        model = ConvolutionalMeasurement(complex_gaussian(rng, m), n)
        y = model.measure(x)
        init = spectral_init(model, y, rng=rng)
        assert dist_mod_phase(init.z0, x) < 0.3
        assert abs(init.lam - 1.0) < 0.2
        assert init.power_iters_used <= 100
        assert np.allclose(init.z0, init.lam * init.eigvec, atol=0)

    def test_scale_tracks_signal_norm(self):
        rng = np.random.default_rng(9)
        n, m = 8, 4096
        x = 3.0 * complex_gaussian(rng, n) / np.sqrt(n)
        model = ConvolutionalMeasurement(complex_gaussian(rng, m), n)
        init = spectral_init(model, model.measure(x), rng=rng)
        assert abs(init.lam - np.linalg.norm(x)) < 0.15 * np.linalg.norm(x)

    def test_zero_observations_degenerate(self):
        rng = np.random.default_rng(1)
        model = ConvolutionalMeasurement(complex_gaussian(rng, 16), 4)
        with pytest.raises(DegenerateOperator):
            spectral_init(model, np.zeros(16), rng=0)

    def test_deterministic_for_seed(self):
        rng = np.random.default_rng(77)
        n, m = 6, 64
        model = ConvolutionalMeasurement(complex_gaussian(rng, m), n)
        y = model.measure(complex_gaussian(rng, n))
        a = spectral_init(model, y, rng=5)
        b = spectral_init(model, y, rng=5)
        assert np.array_equal(a.z0, b.z0)
        assert a.eigval_estimate == b.eigval_estimate


class TestNormEstimate:
    def test_hand_values(self):
        assert norm_estimate(np.ones(7)) == 1.0
        assert norm_estimate(np.array([3.0, 4.0])) == pytest.approx(
            np.sqrt(12.5), rel=1e-15)

    def test_concentrates_on_signal_norm(self):
        rng = np.random.default_rng(13)
        n, m = 8, 8192
        x = complex_gaussian(rng, n)
        model = ConvolutionalMeasurement(complex_gaussian(rng, m), n)
        est = norm_estimate(model.measure(x))
        assert abs(est - np.linalg.norm(x)) < 0.05 * np.linalg.norm(x)

    def test_rejects_negative(self):
        with pytest.raises(InvalidInput):
            norm_estimate(np.array([1.0, -2.0]))
