import math

import numpy as np
import pytest

from convpr import (
    InvalidInput,
    InvalidParameter,
    WeightingScheme,
    delta_infty,
    eta,
    h_closed_form,
    nu,
    psi,
    weights_from_observations,
    xi,
    zeta,
)


def gauss_hermite_smoothing(func, t, nodes=120):
    """Deterministic oracle for E[func(t + s)], s ~ CN(0,1), by tensorized
    Gauss-Hermite quadrature over the real and imaginary parts."""
    x, w = np.polynomial.hermite.hermgauss(nodes)
    # s = u + iv with u, v ~ N(0, 1/2): u = sqrt(2 * 1/2) x = x under
    # the Gauss-Hermite weight exp(-x^2)
    u = x
    weights = w / math.sqrt(math.pi)
    total = 0.0
    for ui, wi in zip(u, weights):
        vals = func(t + ui + 1j * u)
        total += wi * np.sum(weights * vals)
    return total


class TestProfiles:
    def test_zeta_basics(self):
        assert zeta(0.0, 0.51) == 0.0
        assert zeta(50.0, 0.51) == pytest.approx(1.0, abs=1e-12)
        t = np.linspace(0.0, 5.0, 200)
        vals = zeta(t, 0.51)
        assert np.all(vals >= 0.0) and np.all(vals < 1.0)
        assert np.all(np.diff(vals) > 0.0)

    def test_zeta_consistent_with_xi(self):
        # zeta = 1 - 2 pi sigma_sq xi by definition
        rng = np.random.default_rng(0)
        t = rng.standard_normal(100) + 1j * rng.standard_normal(100)
        for s2 in (0.51, 0.8, 3.0):
            np.testing.assert_allclose(
                zeta(t, s2), 1.0 - 2.0 * np.pi * s2 * xi(t, s2), atol=1e-15
            )

    def test_xi_is_a_density(self):
        # radial integral of xi over the plane is 1
        for s2 in (0.51, 2.0):
            r = np.linspace(0.0, 40.0, 400_001)
            vals = xi(r, s2) * 2.0 * np.pi * r
            assert np.trapezoid(vals, r) == pytest.approx(1.0, abs=1e-8)

    def test_sigma_sq_domains(self):
        with pytest.raises(InvalidParameter):
            zeta(1.0, 0.5)
        with pytest.raises(InvalidParameter):
            eta(1.0, 0.5)
        with pytest.raises(InvalidParameter):
            nu(1.0, 0.49)
        with pytest.raises(InvalidParameter):
            xi(1.0, 0.0)
        # xi itself only needs sigma_sq > 0
        assert xi(0.0, 0.2) == pytest.approx(1.0 / (2.0 * np.pi * 0.2))

    # The eta and nu integrands carry an inverse-filter factor
    # exp(-|u|^2 / (2 sigma_sq - 1)) that degenerates to a spike as
    # sigma_sq -> 1/2, which fixed-node Gauss-Hermite cannot resolve;
    # sigma_sq = 0.51 is covered by the Monte Carlo suite instead, and
    # the quadrature checks run where the rule is exact.

    def test_eta_smoothing_identity_by_quadrature(self):
        # E[eta(t + s)] = zeta(t) for s ~ CN(0,1)
        for s2 in (0.75, 1.0, 2.5):
            for t in (0.0, 0.7, 1.5 + 0.5j):
                est = gauss_hermite_smoothing(lambda u: eta(u, s2), t)
                assert est == pytest.approx(zeta(t, s2), abs=1e-12)

    def test_nu_tilt_identity_by_quadrature(self):
        # E[(t + s) nu(t + s)] = t zeta(t) for s ~ CN(0,1)
        for s2 in (0.75, 1.3):
            for t in (0.5, 1.0, 2.0 - 1.0j):
                est_re = gauss_hermite_smoothing(lambda u: (u * nu(u, s2)).real, t)
                est_im = gauss_hermite_smoothing(lambda u: (u * nu(u, s2)).imag, t)
                target = complex(t) * zeta(t, s2)
                assert est_re == pytest.approx(target.real, abs=1e-12)
                assert est_im == pytest.approx(target.imag, abs=1e-12)

    def test_xi_smoothing_identity_by_quadrature(self):
        # E[xi_{s2}(t + s)] = xi_{s2 + 1/2}(t)
        for s2 in (0.51, 0.6, 1.5):
            for t in (0.0, 1.0, 0.5 + 2.0j):
                est = gauss_hermite_smoothing(lambda u: xi(u, s2), t)
                assert est == pytest.approx(xi(t, s2 + 0.5), abs=1e-12)


class TestPsiAndH:
    def test_psi_anchor_values(self):
        assert psi(0.0) == 1.0 + 0.0j
        assert psi(1j) == pytest.approx(-1.0 + 0.0j, abs=1e-15)
        assert psi(1.0 + 1.0j) == pytest.approx(-1.0j, abs=1e-15)
        assert psi(3.0) == pytest.approx(1.0, abs=1e-15)

    def test_psi_unit_magnitude(self):
        rng = np.random.default_rng(1)
        t = rng.standard_normal(500) + 1j * rng.standard_normal(500)
        t[::100] = 0.0
        np.testing.assert_allclose(np.abs(psi(t)), 1.0, atol=1e-14)

    def test_h_anchor_values(self):
        assert h_closed_form(0.0) == 0.0
        assert h_closed_form(1.0) == pytest.approx(math.exp(-1.0), abs=1e-15)
        # large t: h -> 1 - t^{-2}
        assert h_closed_form(30.0) == pytest.approx(1.0 - 30.0**-2, abs=1e-15)

    def test_h_matches_quadrature_of_psi(self):
        # E[psi(t + s)] in polar coordinates about the origin, where the
        # phase factor exp(-2 i theta) is smooth: the density recenters at t
        from scipy.integrate import dblquad

        for t in (0.3, 1.0, 2.0):
            def integrand(rho, theta, t=t):
                w = rho * np.exp(1j * theta)
                return (
                    np.cos(2.0 * theta)
                    * rho
                    * np.exp(-(abs(w - t) ** 2))
                    / np.pi
                )

            est, err = dblquad(integrand, 0.0, 2.0 * np.pi, 0.0, t + 9.0,
                               epsabs=1e-11, epsrel=1e-11)
            assert err < 1e-9
            assert est == pytest.approx(h_closed_form(t), abs=1e-8)

    def test_h_series_branch_continuity(self):
        lo = h_closed_form(np.nextafter(1e-4, 0.0))
        hi = h_closed_form(np.nextafter(1e-4, 1.0))
        assert abs(lo - hi) <= 1e-6 * hi

    def test_h_small_t_series_values(self):
        # leading behavior t^2/2 with relative correction -t^2/3
        for t in (1e-7, 1e-5):
            u = t * t
            assert h_closed_form(t) == pytest.approx(u / 2.0 - u * u / 6.0, rel=1e-10)

    def test_h_monotone_and_bounded(self):
        t = np.linspace(0.0, 20.0, 5000)
        vals = h_closed_form(t)
        assert np.all(np.diff(vals) >= 0.0)
        assert np.all(vals >= 0.0) and np.all(vals < 1.0)

    def test_h_rejects_bad_input(self):
        with pytest.raises(InvalidParameter):
            h_closed_form(-0.1)
        with pytest.raises(InvalidInput):
            h_closed_form(np.array([0.1, np.nan]))


class TestWeightingScheme:
    def test_uniform_weights(self):
        y = np.array([0.0, 1.0, 2.5])
        np.testing.assert_array_equal(
            weights_from_observations(y, WeightingScheme.uniform()), np.ones(3)
        )

    def test_gaussian_weights_equal_zeta(self):
        y = np.array([0.0, 0.5, 1.0, 4.0])
        scheme = WeightingScheme.gaussian_smoothed(0.51)
        np.testing.assert_allclose(
            weights_from_observations(y, scheme), zeta(y, 0.51), atol=0.0
        )

    def test_sigma_sq_gate(self):
        with pytest.raises(InvalidParameter):
            WeightingScheme.gaussian_smoothed(0.5)
        with pytest.raises(InvalidParameter):
            WeightingScheme("gaussian", 0.3)
        WeightingScheme.gaussian_smoothed(0.500001)

    def test_scheme_immutable_and_comparable(self):
        s = WeightingScheme.gaussian_smoothed(0.51)
        with pytest.raises(AttributeError):
            s.sigma_sq = 1.0
        assert s == WeightingScheme("gaussian", 0.51)
        assert s != WeightingScheme.uniform()
        assert len({s, WeightingScheme("gaussian", 0.51)}) == 1

    def test_negative_observations_rejected(self):
        with pytest.raises(InvalidInput):
            weights_from_observations(np.array([1.0, -0.1]), WeightingScheme.uniform())

    def test_unknown_kind_rejected(self):
        with pytest.raises(InvalidParameter):
            WeightingScheme("exponential")


class TestDeltaInfty:
    def test_default_parameters_reproduce_tail_bound(self):
        val = delta_infty(0.51, 0.2)
        assert abs(val - 0.404) <= 1e-3
        # the analytic tail (1 + 2 sigma_sq) eps dominates the grid maximum
        assert val == pytest.approx((1.0 + 2.0 * 0.51) * 0.2, abs=1e-12)

    def test_grid_refinement_stable(self):
        coarse = delta_infty(0.51, 0.2, grid=(50.0, 1e-3))
        fine = delta_infty(0.51, 0.2, grid=(50.0, 5e-4))
        assert abs(coarse - fine) <= 1e-4

    def test_zero_epsilon_interior_maximum(self):
        val = delta_infty(0.51, 0.0)
        assert 0.3 <= val <= 0.8
        fine = delta_infty(0.51, 0.0, grid=(50.0, 2e-4))
        assert abs(val - fine) <= 1e-4

    def test_parameter_validation(self):
        with pytest.raises(InvalidParameter):
            delta_infty(0.5, 0.2)
        with pytest.raises(InvalidParameter):
            delta_infty(0.51, 1.0)
        with pytest.raises(InvalidParameter):
            delta_infty(0.51, -0.01)
        with pytest.raises(InvalidParameter):
            delta_infty(0.51, 0.2, grid=(0.0, 1e-3))
