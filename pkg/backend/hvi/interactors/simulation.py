import logging
import math
from dataclasses import dataclass
from functools import partial

import pandas as pd

import hvi.domain as d
from hvi.dto import RunConfig
from hvi.output import Artifact

from .base import BaseInteractor

logger = logging.getLogger(__name__)


class Simulate(BaseInteractor):
    """
    One time-domain run from (q0, p0) with F = eps f and Omega = 1 + eps sigma.
    """

    def __call__(self, dto: RunConfig) -> Artifact:
        sigma = self._must_get_scalar(dto, "sigma")
        f = self._must_get_scalar(dto, "f")
        Omega = 1.0 + dto.eps * sigma
        estimator = d.Estimator(dto.estimator or self.estimator)

        cfg = d.SimConfig(
            F=dto.eps * f,
            Omega=Omega,
            q0=dto.q0,
            p0=dto.p0,
            horizon=dto.horizon or self.horizon,
            dt_out=self.dt_out,
        )
        traj = d.simulate(
            cfg,
            max_impacts=self.max_impacts,
            graze_tol=self.graze_tol,
            resonance_tol=self.resonance_tol,
        )
        summary = d.energy_summary(traj, Omega, dto.xi_crit, estimator)

        return Artifact(
            frame=traj.to_frame(),
            summary={
                "max_E_inst": summary.max_E_inst,
                "max_xi_windowed": summary.max_xi_windowed,
                "t_of_max": summary.t_of_max,
                "impacts": traj.impacts,
                "crossed": summary.crossed,
                "t_cross": summary.t_cross,
                "estimator": summary.estimator.value,
            },
        )


@dataclass(frozen=True)
class SweepTask:
    sigma: float
    f_analytic: float
    mechanism: str
    f_lo: float
    f_hi: float


def _numeric_boundary(
    task: SweepTask,
    eps: float,
    xi_crit: float,
    horizon: float,
    width: float,
    estimator: str,
    dt_out: float,
) -> float:
    try:
        return d.numeric_boundary(
            task.sigma,
            eps,
            xi_crit,
            task.f_lo,
            task.f_hi,
            horizon,
            width=width,
            estimator=d.Estimator(estimator),
            dt_out=dt_out,
        )
    except d.InvalidBracketError as e:
        logger.warning("%r", e)
        return math.nan


class Sweep(BaseInteractor):
    """
    Numeric critical amplitudes from time-domain bisection next to the
    analytic boundary. Each detuning is bracketed by +-`sweep.bracket`
    relative to its analytic amplitude.
    """

    def __call__(self, dto: RunConfig) -> Artifact:
        xi_crit = self._must_get(dto, "xi_crit")
        sigmas = self._must_get(dto, "sigma").values()

        boundary = d.transition_boundary(xi_crit, sigmas, dto.eps)
        tasks = [
            SweepTask(
                sigma=s.sigma,
                f_analytic=s.f_crit,
                mechanism=s.mechanism.value,
                f_lo=s.f_crit * (1.0 - self.sweep_bracket),
                f_hi=s.f_crit * (1.0 + self.sweep_bracket),
            )
            for s in boundary.samples
        ]

        numeric = self.map(
            partial(
                _numeric_boundary,
                eps=dto.eps,
                xi_crit=xi_crit,
                horizon=dto.horizon or self.horizon,
                width=self.sweep_width,
                estimator=dto.estimator or self.estimator,
                dt_out=self.dt_out,
            ),
            tasks,
            dto,
        )

        frame = pd.DataFrame(
            {
                "sigma": [t.sigma for t in tasks],
                "f_numeric": numeric,
                "f_analytic": [t.f_analytic for t in tasks],
                "mechanism": [t.mechanism for t in tasks],
            }
        )
        frame["rel_err"] = (frame.f_numeric - frame.f_analytic).abs() / frame.f_analytic
        return Artifact(frame=frame)
