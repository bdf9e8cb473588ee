import logging
import math

import numpy as np
import pandas as pd

import hvi.domain as d
from hvi.dto import RunConfig
from hvi.output import Artifact

from .base import BaseInteractor, InvalidRangeError

logger = logging.getLogger(__name__)


class ActionAngle(BaseInteractor):
    def __call__(self, dto: RunConfig) -> Artifact:
        xs = self._must_get(dto, "xi").values()
        if np.any(xs < 0):
            raise InvalidRangeError("xi", str(dto.xi), "energies must be >= 0")

        rows = [d.aa_quantities(float(x)) for x in xs]
        return Artifact(
            frame=pd.DataFrame(
                {
                    "xi": [r.xi for r in rows],
                    "phi": [r.phi for r in rows],
                    "J": [r.J for r in rows],
                    "omega": [r.omega for r in rows],
                    "a1": [r.a1 for r in rows],
                    "dJ_dxi": [r.dJ_dxi for r in rows],
                    "da1_dxi": [r.da1_dxi for r in rows],
                }
            )
        )


class Basis(BaseInteractor):
    """
    Samples of the nonsmooth basis g(tau) or, with `harmonics`, its Fourier
    sine coefficients next to the closed form.
    """

    def __call__(self, dto: RunConfig) -> Artifact:
        beta = self._must_get(dto, "beta")

        if dto.harmonics is not None:
            harmonics = range(1, dto.harmonics + 1)
            reports = [d.fourier_bn_report(n, beta) for n in harmonics]
            return Artifact(
                frame=pd.DataFrame(
                    {
                        "n": [r.n for r in reports],
                        "quadrature": [r.quadrature for r in reports],
                        "printed": [r.printed for r in reports],
                        "discrepancy": [r.discrepancy for r in reports],
                    }
                )
            )

        if dto.tau is not None:
            taus = dto.tau.values()
        else:
            taus = np.linspace(0, 2 * math.pi, 201)
        samples = [d.basis_g(float(t), beta) for t in taus]
        energy = 0.5 * (beta / math.sin(beta)) ** 2 if beta > 0 else 0.5
        return Artifact(
            frame=pd.DataFrame(
                {
                    "tau": [s.tau for s in samples],
                    "tau_bar": [s.tau_bar for s in samples],
                    "e_bar": [s.e_bar for s in samples],
                    "g": [s.g for s in samples],
                    "g_prime": [s.g_prime for s in samples],
                    "g_prime_printed": [s.g_prime_printed for s in samples],
                }
            ),
            summary={"beta": beta, "E": energy},
        )


def _forcing(self: BaseInteractor, dto: RunConfig) -> d.ScaledForcing:
    f = self._must_get_scalar(dto, "f")
    if f < 0:
        raise InvalidRangeError("f", str(dto.f), "forcing must be >= 0")
    return d.ScaledForcing(
        eps=dto.eps,
        f=f,
        sigma=self._must_get_scalar(dto, "sigma"),
    )


def _contour_frame(contour: d.LPTContour) -> pd.DataFrame:
    return pd.DataFrame({"nu": contour.nu, "xi": contour.xi})


class LimitingPhaseTrajectory(BaseInteractor):
    def __call__(self, dto: RunConfig) -> Artifact:
        forcing = _forcing(self, dto)
        contour = d.lpt_contour(
            forcing,
            dto.nu_samples or self.nu_samples,
            dto.xi_max or self.xi_max,
            xi_step=self.xi_step,
            saddle_tol=self.saddle_tol,
        )
        return Artifact(
            frame=_contour_frame(contour),
            summary={
                "max_xi": contour.max_xi,
                "passes_saddle": contour.passes_saddle,
            },
        )


class Portrait(BaseInteractor):
    """
    C(nu, xi) on a mesh plus the LPT as a second table.
    """

    def __call__(self, dto: RunConfig) -> Artifact:
        forcing = _forcing(self, dto)
        n_nu = dto.nu_samples or 181
        xi_max = dto.xi_max or 2.0
        xis = dto.xi.values() if dto.xi is not None else np.linspace(0, xi_max, 201)
        nus = np.linspace(0, 2 * math.pi, n_nu)

        grid = d.manifold_grid(nus, xis, forcing)
        nu_mesh, xi_mesh = np.meshgrid(nus, xis)
        frame = pd.DataFrame(
            {"nu": nu_mesh.ravel(), "xi": xi_mesh.ravel(), "C": grid.ravel()}
        )

        contour = d.lpt_contour(
            forcing,
            self.nu_samples,
            max(self.xi_max, float(xis[-1])),
            xi_step=self.xi_step,
            saddle_tol=self.saddle_tol,
        )
        return Artifact(
            frame=frame,
            extra={"lpt": _contour_frame(contour)},
            summary={
                "max_xi": contour.max_xi,
                "passes_saddle": contour.passes_saddle,
            },
        )


class StationaryPoints(BaseInteractor):
    def __call__(self, dto: RunConfig) -> Artifact:
        forcing = _forcing(self, dto)
        points = d.stationary_points(
            forcing, dto.xi_window or self.xi_window, xtol=self.xtol
        )
        return Artifact(
            frame=pd.DataFrame(
                {
                    "nu0": [p.nu0 for p in points],
                    "xi0": [p.xi0 for p in points],
                    "kind": [p.kind.value for p in points],
                    "degenerate": [p.degenerate for p in points],
                }
            )
        )


class StationaryLocus(BaseInteractor):
    def __call__(self, dto: RunConfig) -> Artifact:
        xi0 = self._must_get_range(dto, "xi")
        if xi0.lo <= d.XI_WALL:
            raise InvalidRangeError("xi", str(xi0), f"xi0 must exceed {d.XI_WALL}")

        samples = d.stationary_locus(xi0.values(), dto.eps)
        fold_sigma, fold_xi0 = d.locus_fold(dto.eps)
        return Artifact(
            frame=pd.DataFrame(
                {
                    "xi0": [s.xi0 for s in samples],
                    "sigma": [s.sigma for s in samples],
                    "f": [s.f for s in samples],
                    "nu0": [s.nu0 for s in samples],
                    "kind": [s.kind.value for s in samples],
                }
            ),
            summary={
                "asymptote": d.locus_asymptote(),
                "fold_sigma": fold_sigma,
                "fold_xi0": fold_xi0,
            },
        )
