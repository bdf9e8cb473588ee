import logging
from functools import partial

import numpy as np
import pandas as pd

import hvi.domain as d
from hvi.dto import RunConfig
from hvi.output import Artifact

from .base import BaseInteractor, InvalidRangeError

logger = logging.getLogger(__name__)


class TransitionBoundary(BaseInteractor):
    """
    Critical forcing f_crit(sigma) for reaching xi_crit, with the coexistence
    point of both mechanisms as footer.
    """

    def __call__(self, dto: RunConfig) -> Artifact:
        xi_crit = self._must_get(dto, "xi_crit")
        sigmas = self._must_get(dto, "sigma").values()

        boundary = d.transition_boundary(xi_crit, sigmas, dto.eps)
        sigma_star, f_star = boundary.coexistence
        return Artifact(
            frame=pd.DataFrame(
                {
                    "sigma": [s.sigma for s in boundary.samples],
                    "f_crit": [s.f_crit for s in boundary.samples],
                    "mechanism": [s.mechanism.value for s in boundary.samples],
                }
            ),
            summary={"sigma_star": sigma_star, "f_star": f_star},
            footer=True,
        )


class EnergyJump(BaseInteractor):
    """
    Energy level reached right after crossing the type-I boundary.
    """

    def __call__(self, dto: RunConfig) -> Artifact:
        sigmas = self._must_get(dto, "sigma").values()
        samples = d.post_crossing_curve(
            sigmas,
            dto.eps,
            xi_cap=self.xi_cap,
            scan_step=self.scan_step,
            xtol=self.xtol,
        )
        return Artifact(
            frame=pd.DataFrame(
                {
                    "sigma": [s.sigma for s in samples],
                    "branch": [s.branch.value for s in samples],
                    "xi_plus": [s.xi_plus for s in samples],
                }
            ),
            summary={"asymptote": d.jump_asymptote(xtol=self.xtol)},
        )


class FrequencyResponse(BaseInteractor):
    def __call__(self, dto: RunConfig) -> Artifact:
        f = self._must_get_scalar(dto, "f")
        if not f > 0:
            raise InvalidRangeError("f", str(dto.f), "forcing must be positive")
        sigma = self._must_get_range(dto, "sigma")

        points = d.frequency_response(
            f,
            dto.eps,
            (sigma.lo, sigma.hi),
            sigma.count,
            scan_step=self.scan_step,
            xtol=self.xtol,
        )
        return Artifact(
            frame=pd.DataFrame(
                {
                    "sigma": [p.sigma for p in points],
                    "xi": [p.xi for p in points],
                    "branch": [p.branch.value for p in points],
                    "at_jump": [p.at_jump for p in points],
                    "reached": [p.reached for p in points],
                }
            )
        )


def _energy_map_column(f: float, sigmas: np.ndarray, eps: float, kwargs: dict):
    return [d.energy_map(float(s), f, eps, **kwargs) for s in sigmas]


class EnergyMap(BaseInteractor):
    """
    Maximal transient energy on a (sigma, f) grid. Rows of constant f are
    distributed over the worker pool.
    """

    def __call__(self, dto: RunConfig) -> Artifact:
        sigmas = self._must_get(dto, "sigma").values()
        fs = self._must_get(dto, "f").values()
        if np.any(fs < 0):
            raise InvalidRangeError("f", str(dto.f), "forcing must be >= 0")

        kwargs = dict(
            verify=dto.verify,
            xi_cap=self.xi_cap,
            scan_step=self.scan_step,
            xtol=self.xtol,
            crosscheck_tol=self.crosscheck_tol,
        )
        if dto.verify:
            kwargs.update(
                nu_samples=dto.nu_samples or self.nu_samples,
                xi_max=dto.xi_max or self.xi_max,
                xi_step=self.xi_step,
            )

        rows = self.map(
            partial(_energy_map_column, sigmas=sigmas, eps=dto.eps, kwargs=kwargs),
            [float(f) for f in fs],
            dto,
        )
        f_mesh, sigma_mesh = np.meshgrid(fs, sigmas, indexing="ij")
        return Artifact(
            frame=pd.DataFrame(
                {
                    "sigma": sigma_mesh.ravel(),
                    "f": f_mesh.ravel(),
                    "xi_max": np.asarray(rows).ravel(),
                }
            )
        )
