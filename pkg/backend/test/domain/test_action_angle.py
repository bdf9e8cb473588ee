import math

import numpy as np
import pytest

import hvi.domain as d

from ..helper import central_difference, quad_a1, quad_averaged_action

RNG = np.random.default_rng(20240611)
RANDOM_XI = np.concatenate([RNG.uniform(0.01, 0.49, 6), RNG.uniform(0.51, 20.0, 14)])


def test_regime():
    assert d.regime(0.3) is d.Regime.Linear
    assert d.regime(0.5) is d.Regime.HVI
    assert d.regime(3.0) is d.Regime.HVI


def test_known_values_at_one():
    q = d.aa_quantities(1.0)

    assert q.phi == pytest.approx(1.0)
    assert q.J == pytest.approx(0.818310, abs=1e-6)
    assert q.omega == pytest.approx(2.0, rel=1e-12)
    assert q.a1 == pytest.approx(1.200422, abs=1e-6)
    assert q.dJ_dxi == pytest.approx(0.5, rel=1e-12)


class TestLinearRegime:
    @pytest.mark.parametrize("xi", [0.0, 0.1, 0.3, 0.4999])
    def test_closed_forms(self, xi):
        assert d.averaged_action(xi) == xi
        assert d.frequency(xi) == 1.0
        assert d.a1(xi) == pytest.approx(math.sqrt(2 * xi), abs=1e-15)
        assert d.d_frequency(xi) == 0.0
        assert d.d2_averaged_action(xi) == 0.0

    def test_zero_energy(self):
        assert d.a1(0.0) == 0.0
        assert d.phi(0.0) == 0.0


class TestOracles:
    @pytest.mark.parametrize("xi", RANDOM_XI)
    def test_averaged_action_matches_quadrature(self, xi):
        assert d.averaged_action(xi) == pytest.approx(
            quad_averaged_action(xi), rel=1e-8
        )

    @pytest.mark.parametrize("xi", RANDOM_XI)
    def test_a1_matches_quadrature(self, xi):
        assert d.a1(xi) == pytest.approx(quad_a1(xi), rel=1e-8)

    def test_a1_large_energy_limit(self):
        assert d.a1(1e6) == pytest.approx(4 / math.pi, abs=1e-2)

    @pytest.mark.parametrize("xi", [0.8, 1.0, 2.5, 7.0])
    def test_frequency_is_inverse_action_slope(self, xi):
        slope = central_difference(d.averaged_action, xi)

        assert d.frequency(xi) == pytest.approx(1 / slope, rel=1e-7)

    @pytest.mark.parametrize("xi", RANDOM_XI)
    def test_d_averaged_action_matches_finite_difference(self, xi):
        assert d.d_averaged_action(xi) == pytest.approx(
            central_difference(d.averaged_action, xi), rel=1e-5
        )

    @pytest.mark.parametrize("xi", RANDOM_XI)
    def test_d_a1_matches_finite_difference(self, xi):
        assert d.d_a1(xi) == pytest.approx(central_difference(d.a1, xi), rel=1e-5)

    def test_reciprocal_law(self):
        product = d.d_averaged_action(RANDOM_XI) * d.frequency(RANDOM_XI)

        assert np.allclose(product, 1.0, rtol=0, atol=1e-12)

    @pytest.mark.parametrize("xi", [0.8, 1.0, 2.5])
    def test_d_frequency_matches_finite_difference(self, xi):
        assert d.d_frequency(xi) == pytest.approx(
            central_difference(d.frequency, xi), rel=1e-6
        )

    @pytest.mark.parametrize("xi", [0.8, 1.0, 2.5])
    def test_d2_averaged_action_matches_finite_difference(self, xi):
        assert d.d2_averaged_action(xi) == pytest.approx(
            central_difference(d.d_averaged_action, xi), rel=1e-6
        )

    @pytest.mark.parametrize("xi", [0.2, 0.8, 1.0, 2.5])
    def test_d2_a1_matches_finite_difference(self, xi):
        expected = central_difference(d.d_a1, xi, h=1e-5)

        assert d.d2_a1(xi) == pytest.approx(expected, rel=1e-4)


class TestWallEnergy:
    @pytest.mark.parametrize(
        "func", [d.averaged_action, d.frequency, d.a1], ids=["J", "omega", "a1"]
    )
    def test_continuous(self, func):
        below = func(0.5 - 1e-13)
        at = func(0.5)
        above = func(0.5 + 1e-13)

        assert abs(at - below) < 1e-6
        assert abs(above - at) < 1e-6

    @pytest.mark.parametrize("offset", [1e-10, 1e-5], ids=["series", "closed"])
    def test_a1_near_wall_matches_quadrature(self, offset):
        xi = 0.5 + offset

        assert d.a1(xi) == pytest.approx(quad_a1(xi), rel=1e-8)

    def test_derivative_needs_side(self):
        with pytest.raises(d.KinkError):
            d.d_a1(0.5)

    def test_one_sided_derivatives(self):
        assert d.d_a1(0.5, d.Side.Left) == 1.0
        assert d.d_a1(0.5, d.Side.Right) == math.inf

    def test_aa_quantities_report_left_derivative(self):
        assert d.aa_quantities(0.5).da1_dxi == 1.0

    def test_frequency_increases_above_wall(self):
        xi = np.linspace(0.51, 10, 200)

        assert np.all(np.diff(d.frequency(xi)) > 0)

    def test_frequency_never_decreases(self):
        xi = np.linspace(0.0, 20.0, 1000)

        assert np.all(np.diff(d.frequency(xi)) >= 0)


class TestArrays:
    def test_float_in_float_out(self):
        assert isinstance(d.a1(1.0), float)
        assert isinstance(d.averaged_action(0.2), float)

    def test_array_in_array_out(self):
        xi = np.array([0.1, 0.5, 1.0])

        got = d.averaged_action(xi)

        assert isinstance(got, np.ndarray)
        assert got.shape == (3,)
        assert got[0] == 0.1
        assert got[2] == pytest.approx(0.818310, abs=1e-6)

    @pytest.mark.parametrize("bad", [-1e-3, math.nan])
    def test_negative_energy_rejected(self, bad):
        with pytest.raises(d.NegativeEnergyError):
            d.averaged_action(bad)

    def test_negative_energy_in_array_rejected(self):
        with pytest.raises(d.NegativeEnergyError) as e:
            d.a1(np.array([0.3, -2.0]))

        assert e.value.xi == -2.0


class TestPotential:
    def test_inside_and_outside(self):
        got = d.potential(np.array([-1.0, 0.0, 0.5, 1.0, 1.01]))

        assert list(got[:4]) == [0.5, 0.0, 0.125, 0.5]
        assert got[4] == d.WALL

    def test_energy_selects_branch(self):
        assert d.potential(1.01, 0.3) == pytest.approx(0.51005)
        assert d.potential(1.01, 2.0) == d.WALL
        assert d.potential(0.5, 2.0) == 0.125
        assert d.potential(1.01, 0.0) == d.WALL

    def test_q_of_theta_reaches_wall_at_quarter_period(self):
        theta = np.linspace(-math.pi / 2, math.pi / 2, 101)

        q = d.q_of_theta(3.0, theta)

        assert np.max(np.abs(q)) <= 1.0 + 1e-12
        assert abs(d.q_of_theta(3.0, math.pi / 2)) == pytest.approx(1.0)


class TestBasis:
    def test_beta_of_energy_limits(self):
        assert d.beta_of_energy(0.5) == 0.0
        assert d.beta_of_energy(math.pi**2 / 8) == pytest.approx(math.pi / 2)

    @pytest.mark.parametrize("beta", [0.3, 0.9, 1.4])
    def test_beta_of_energy_inverts(self, beta):
        E = 0.5 * (beta / math.sin(beta)) ** 2

        assert d.beta_of_energy(E) == pytest.approx(beta, abs=1e-10)

    @pytest.mark.parametrize("E", [0.4, 1.3])
    def test_beta_of_energy_out_of_range(self, E):
        with pytest.raises(d.EnergyOutOfRangeError):
            d.beta_of_energy(E)

    def test_beta_zero_is_triangle_wave(self):
        s = d.basis_g(0.3, 0.0)

        assert s.g == pytest.approx(2 / math.pi * 0.3)
        assert s.e_bar == 1.0
        assert s.g_prime == pytest.approx(2 / math.pi)
        assert s.g_prime_printed == 1.0

    @pytest.mark.parametrize("tau", [0.4, 2.0, 4.0, 5.5])
    def test_g_prime_is_derivative(self, tau):
        beta = 1.1

        got = d.basis_g(tau, beta).g_prime

        assert got == pytest.approx(
            central_difference(lambda t: d.basis_g(t, beta).g, tau), rel=1e-6
        )

    def test_g_reaches_one_at_quarter_period(self):
        assert d.basis_g(math.pi / 2, 1.2).g == pytest.approx(1.0)

    def test_invalid_beta(self):
        with pytest.raises(ValueError):
            d.basis_g(0.0, 2.0)

    def test_fourier_even_harmonics_vanish(self):
        assert d.fourier_bn(2, 1.0) == pytest.approx(0.0, abs=1e-12)
        assert d.fourier_bn(4, 1.0) == pytest.approx(0.0, abs=1e-12)

    def test_fourier_triangle_wave(self):
        # b_n of the unit triangle wave is 8 / (pi^2 n^2) (-1)^((n-1)/2)
        assert d.fourier_bn(1, 0.0) == pytest.approx(8 / math.pi**2, rel=1e-10)
        assert d.fourier_bn(3, 0.0) == pytest.approx(-8 / (9 * math.pi**2), rel=1e-9)

    def test_fourier_partial_sum_converges(self):
        beta = 1.25
        tau = np.linspace(-math.pi, math.pi, 401)
        coefficients = [d.fourier_bn(n, beta) for n in range(1, 100)]

        partial = sum(
            b * np.sin(n * tau) for n, b in enumerate(coefficients, start=1)
        )
        exact = np.array([d.basis_g(t, beta).g for t in tau])

        assert np.max(np.abs(partial - exact)) < 0.02

    def test_fourier_invalid_order(self):
        with pytest.raises(ValueError):
            d.fourier_bn(0, 1.0)

    def test_printed_closed_form_singularity(self):
        assert math.isnan(d.fourier_bn_printed(1, 1.0))

    def test_report(self):
        report = d.fourier_bn_report(3, 0.8)

        assert report.n == 3
        assert report.quadrature == d.fourier_bn(3, 0.8)
        assert report.discrepancy == abs(report.quadrature - report.printed)
