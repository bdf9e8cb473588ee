import math

import numpy as np
import pytest

import hvi.domain as d

from ..helper import central_difference, wrapped


def kink_saddle(points):
    return [p for p in points if p.nu0 == math.pi and p.xi0 == 0.5]


class TestScaledForcing:
    def test_scaled_values(self):
        forcing = d.ScaledForcing(eps=0.1, f=2.0, sigma=-3.0)

        assert forcing.F == pytest.approx(0.2)
        assert forcing.Omega == pytest.approx(0.7)

    @pytest.mark.parametrize("kwargs", [{"eps": 0.0}, {"f": -1.0}])
    def test_invalid(self, kwargs):
        values = {"eps": 0.1, "f": 1.0, "sigma": 0.0} | kwargs

        with pytest.raises(ValueError):
            d.ScaledForcing(**values)

    def test_phase_is_wrapped(self):
        p = d.PhasePoint(-math.pi / 2, 0.3)

        assert p.nu == pytest.approx(3 * math.pi / 2)


class TestConservation:
    def test_rest_state_is_on_zero_level(self, forcing_at_threshold):
        nu = np.linspace(0, 2 * math.pi, 9)

        got = d.conservation(nu, 0.0, forcing_at_threshold)

        assert np.all(got == 0.0)

    def test_mirror_symmetric_in_phase(self, forcing_at_threshold):
        nu = np.linspace(0, 2 * math.pi, 181)
        xi = np.linspace(0, 3, 61)

        grid = d.manifold_grid(nu, xi, forcing_at_threshold)
        mirrored = d.manifold_grid(2 * math.pi - nu, xi, forcing_at_threshold)

        assert np.allclose(grid, mirrored, rtol=0, atol=1e-12)

    @pytest.mark.parametrize("xi", [0.2, 0.5, 1.0, 2.5])
    def test_phase_extrema_only_at_zero_and_pi(self, forcing_at_threshold, xi):
        nu = np.linspace(0.01, 2 * math.pi - 0.01, 400)

        slope = d.dC_dnu(nu, xi, forcing_at_threshold)
        changes = np.nonzero(np.diff(np.sign(slope)))[0]

        assert len(changes) == 1
        assert nu[changes[0]] < math.pi < nu[changes[0] + 1]

    def test_grid_shape(self, forcing_at_threshold):
        nu = np.linspace(0, 2 * math.pi, 7)
        xi = np.linspace(0, 2, 5)

        grid = d.manifold_grid(nu, xi, forcing_at_threshold)

        assert grid.shape == (5, 7)
        assert grid[3, 2] == pytest.approx(
            d.manifold_value(d.PhasePoint(nu[2], xi[3]), forcing_at_threshold)
        )

    @pytest.mark.parametrize("nu,xi", [(0.3, 0.2), (2.0, 0.9), (4.0, 3.0)])
    def test_partials(self, forcing_at_threshold, nu, xi):
        got_nu = d.dC_dnu(nu, xi, forcing_at_threshold)
        got_xi = d.dC_dxi(nu, xi, forcing_at_threshold)

        assert got_nu == pytest.approx(
            central_difference(
                lambda v: d.conservation(v, xi, forcing_at_threshold), nu
            ),
            rel=1e-6,
        )
        assert got_xi == pytest.approx(
            central_difference(
                lambda x: d.conservation(nu, x, forcing_at_threshold), xi
            ),
            rel=1e-6,
        )

    def test_dC_dxi_at_kink_needs_side(self, forcing_at_threshold):
        with pytest.raises(d.KinkError):
            d.dC_dxi(math.pi, 0.5, forcing_at_threshold)


class TestStationaryPoints:
    def test_kink_saddle_always_reported(self):
        sigmas = np.linspace(-3.0, 6.0, 20)
        fs = np.linspace(0.05, 4.0, 20)

        for sigma in sigmas:
            for f in fs:
                forcing = d.ScaledForcing(eps=0.1, f=float(f), sigma=float(sigma))
                points = d.stationary_points(forcing, xi_window=2.0)

                found = kink_saddle(points)
                assert len(found) == 1, (sigma, f)
                assert found[0].kind is d.StationaryKind.Saddle
                assert found[0].degenerate

    def test_unforced_has_only_kink(self):
        forcing = d.ScaledForcing(eps=0.1, f=0.0, sigma=-1.0)

        points = d.stationary_points(forcing)

        assert len(points) == 1
        assert points[0].xi0 == 0.5

    def test_points_are_stationary(self, forcing_saddle):
        points = d.stationary_points(forcing_saddle)

        for p in points:
            if p.xi0 == 0.5:
                continue
            assert p.nu0 in (0.0, math.pi)
            assert d.dC_dxi(p.nu0, p.xi0, forcing_saddle) == pytest.approx(
                0.0, abs=1e-7
            )

    def test_sorted(self, forcing_saddle):
        points = d.stationary_points(forcing_saddle)

        keys = [(p.nu0, p.xi0) for p in points]
        assert keys == sorted(keys)

    def test_linear_minimum_below_resonance(self):
        # sigma < 0: the linear forced response is a centre on nu = 0
        forcing = d.ScaledForcing(eps=0.1, f=0.3, sigma=-1.0)

        points = d.stationary_points(forcing)
        linear = [p for p in points if p.xi0 < 0.5]

        assert len(linear) == 1
        assert linear[0].nu0 == 0.0
        assert linear[0].kind is not d.StationaryKind.Saddle

    def test_invalid_window(self, forcing_saddle):
        with pytest.raises(ValueError):
            d.stationary_points(forcing_saddle, xi_window=0.5)

    def test_classify_rejects_non_stationary(self, forcing_saddle):
        p = d.StationaryPoint(nu0=0.0, xi0=1.7, kind=d.StationaryKind.Saddle)

        with pytest.raises(ValueError):
            d.classify_stationary(p, forcing_saddle)

    def test_classify_kink(self, forcing_saddle):
        p = d.StationaryPoint(nu0=math.pi, xi0=0.5, kind=d.StationaryKind.Minimum)

        assert d.classify_stationary(p, forcing_saddle) is d.StationaryKind.Saddle


class TestLocus:
    def test_asymptote(self):
        assert d.locus_asymptote() == pytest.approx(0.51229, abs=1e-4)

    def test_fold(self):
        sigma, xi0 = d.locus_fold(0.1)

        assert sigma == pytest.approx(4.5636, abs=1e-2)
        assert xi0 == pytest.approx(0.5435, abs=1e-2)

    def test_linear_energies_rejected(self):
        with pytest.raises(ValueError):
            d.sigma_of_stationary(0.5)

    @pytest.mark.parametrize("xi0", [0.6, 0.9, 1.5])
    def test_locus_point_is_stationary_on_lpt(self, xi0):
        sigma = d.sigma_of_stationary(xi0)
        f = d.locus_forcing(xi0, sigma)
        nu0 = math.pi if f >= 0 else 0.0
        forcing = d.ScaledForcing(eps=0.1, f=abs(f), sigma=sigma)

        assert d.conservation(nu0, xi0, forcing) == pytest.approx(0.0, abs=1e-12)
        assert d.dC_dxi(nu0, xi0, forcing) == pytest.approx(0.0, abs=1e-9)

    def test_two_branches_beyond_fold(self):
        xi0 = np.linspace(0.5124, 1.0, 4000)

        samples = d.stationary_locus(xi0)
        shifted = np.array([s.sigma for s in samples]) - 5.0
        crossings = np.flatnonzero(np.sign(shifted[:-1]) != np.sign(shifted[1:]))

        assert len(crossings) == 2
        kinds = {samples[i].kind for i in crossings}
        assert d.StationaryKind.Saddle in kinds
        assert len(kinds) == 2

    def test_samples_carry_positive_forcing(self):
        samples = d.stationary_locus(np.linspace(0.55, 3.0, 50))

        assert samples
        assert all(s.f >= 0 for s in samples)
        assert all(s.nu0 in (0.0, math.pi) for s in samples)


class TestLPT:
    def test_unforced(self):
        forcing = d.ScaledForcing(eps=0.1, f=0.0, sigma=-1.0)

        lpt = d.lpt_contour(forcing, nu_samples=64)

        assert lpt.max_xi == 0.0
        assert not lpt.passes_saddle

    def test_linear_beating(self):
        forcing = d.ScaledForcing(eps=0.1, f=0.5, sigma=-1.0)

        lpt = d.lpt_contour(forcing, nu_samples=256, xi_max=1.0)

        assert lpt.max_xi == pytest.approx(0.125, abs=2e-3)
        assert not lpt.passes_saddle

    def test_points_on_zero_level(self, forcing_at_threshold):
        lpt = d.lpt_contour(forcing_at_threshold, nu_samples=128, xi_max=3.0)

        values = d.conservation(lpt.nu, lpt.xi, forcing_at_threshold)
        assert np.max(np.abs(values)) < 1e-9
        assert np.all((lpt.nu >= 0) & (lpt.nu < 2 * math.pi))

    def test_leaves_rest_state_at_quarter_phases(self, forcing_at_threshold):
        lpt = d.lpt_contour(forcing_at_threshold, nu_samples=256, xi_max=3.0)

        low = lpt.nu[lpt.xi < 1e-6]
        assert low.size > 0
        assert np.all(
            np.minimum(
                np.abs([wrapped(v - math.pi / 2) for v in low]),
                np.abs([wrapped(v + math.pi / 2) for v in low]),
            )
            < 0.05
        )

    def test_maximum_mechanism_reaches_threshold(self, forcing_at_threshold):
        lpt = d.lpt_contour(forcing_at_threshold, nu_samples=256, xi_max=3.0)

        assert lpt.max_xi == pytest.approx(1.0, abs=2e-2)

    def test_saddle_mechanism(self):
        forcing = d.ScaledForcing(eps=0.1, f=1.525, sigma=1.5)

        lpt = d.lpt_contour(forcing, nu_samples=256, xi_max=4.0)

        assert lpt.passes_saddle
        assert lpt.max_xi > 1.0

    def test_escape(self):
        forcing = d.ScaledForcing(eps=0.1, f=1.525, sigma=1.5)

        with pytest.raises(d.LPTEscapeError) as e:
            d.lpt_contour(forcing, nu_samples=64, xi_max=0.8)

        assert e.value.xi_max == 0.8

    def test_invalid_sampling(self, forcing_at_threshold):
        with pytest.raises(ValueError):
            d.lpt_contour(forcing_at_threshold, nu_samples=8)
