import math
from unittest.mock import patch

import pytest

import hvi.domain as d
import hvi.interactors as i
from hvi.dto import Command

from .helper import create_RunConfig


class TestSimulate:
    def test_run(self, settings):
        i8r = i.Simulate(settings)
        dto = create_RunConfig(
            Command.Simulate, sigma=1.0, f=1.7, horizon=100.0, xi_crit=0.5
        )

        got = i8r(dto)

        assert list(got.frame.columns) == ["tau", "q", "p", "E"]
        assert got.frame.tau.iloc[-1] == pytest.approx(100.0)
        assert got.summary["impacts"] > 0
        assert got.summary["crossed"]
        assert got.summary["estimator"] == "instantaneous"

    def test_windowed_estimator(self, settings):
        i8r = i.Simulate(settings)
        dto = create_RunConfig(
            Command.Simulate,
            sigma=-1.0,
            f=0.5,
            horizon=50.0,
            estimator="windowed",
        )

        got = i8r(dto)

        assert got.summary["estimator"] == "windowed"
        assert got.summary["impacts"] == 0
        assert got.summary["max_xi_windowed"] < got.summary["max_E_inst"]

    def test_missing_detuning(self, settings):
        with pytest.raises(i.MissingParameterError):
            i.Simulate(settings)(create_RunConfig(Command.Simulate, f=1.0))


class TestSweep:
    def test_uses_analytic_brackets(self, settings):
        i8r = i.Sweep(settings)
        dto = create_RunConfig(Command.Sweep, xi_crit=0.5, sigma="-1:1:2", jobs=1)

        with patch.object(d, "numeric_boundary", return_value=1.0) as nb:
            got = i8r(dto)

        assert nb.call_count == 2
        for call in nb.call_args_list:
            sigma, eps, xi, f_lo, f_hi = call.args[:5]
            assert eps == 0.1
            assert xi == 0.5
            assert f_lo == pytest.approx(0.5 * abs(sigma))
            assert f_hi == pytest.approx(1.5 * abs(sigma))
        assert list(got.frame.columns) == [
            "sigma",
            "f_numeric",
            "f_analytic",
            "mechanism",
            "rel_err",
        ]
        assert list(got.frame.rel_err) == [0.0, 0.0]

    def test_invalid_bracket_gives_nan(self, settings):
        i8r = i.Sweep(settings)
        dto = create_RunConfig(Command.Sweep, xi_crit=0.5, sigma=1.0, jobs=1)
        error = d.InvalidBracketError(0.5, 1.5, "upper end does not cross", 1.0)

        with patch.object(d, "numeric_boundary", side_effect=error):
            got = i8r(dto)

        assert math.isnan(got.frame.f_numeric.iloc[0])

    def test_numeric_agrees_on_type_one(self, settings):
        i8r = i.Sweep(settings)
        dto = create_RunConfig(
            Command.Sweep, xi_crit=0.5, sigma="-1.5:1.5:2", horizon=200.0
        )

        got = i8r(dto)

        assert (got.frame.rel_err < 0.1).all()
