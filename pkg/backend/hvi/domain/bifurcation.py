"""
Transition boundaries of the forced oscillator in the (sigma, f) plane.

A boundary is the critical forcing amplitude at which the limiting phase
trajectory first reaches a chosen averaged energy xi_tilde. It is reached
either gradually on nu = 0 (maximum mechanism, left branch) or through the
degenerate saddle at (pi, 1/2) (saddle mechanism, right branch). Crossing
xi_tilde = 1/2 is the type-I bifurcation, any other level type-II.
"""
import enum
import logging
import math
from dataclasses import KW_ONLY, dataclass, field
from typing import Optional

import numpy as np

from hvi.log import time_me

from . import action_angle as aa
from . import manifold as rm
from . import roots
from .base import (
    XI_WALL,
    AveragedEnergy,
    BracketError,
    BranchOutOfRangeError,
    LPTEscapeError,
    MechanismNotApplicableError,
    NonConvergenceError,
)

logger = logging.getLogger(__name__)

DEFAULT_EPS = rm.DEFAULT_EPS

# upper end of the search window for post-crossing energies
XI_CAP = 50.0

# post-crossing roots are searched from just above the kink
XI_START = 1e-9


class Mechanism(enum.Enum):  # TODO: make StrEnum in python 3.11
    Maximum = "maximum"
    Saddle = "saddle"


class Branch(enum.Enum):  # TODO: make StrEnum in python 3.11
    Linear = "linear"
    HVIMax = "hvi_max"
    HVISaddle = "hvi_saddle"


class CriticalEnergy(float):
    """
    Threshold energy xi_tilde, a positive float. 1/2 marks type-I.
    """

    def __new__(cls, value: float):
        if not value > 0:
            raise ValueError(f"critical energy must be positive, got {value}")
        return super().__new__(cls, value)

    @property
    def is_type_one(self) -> bool:
        return float(self) == XI_WALL


@dataclass
class BoundarySample:
    _: KW_ONLY
    sigma: float
    f_crit: float
    mechanism: Mechanism
    f_maximum: Optional[float] = None
    f_saddle: Optional[float] = None


@dataclass
class TransitionBoundary:
    _: KW_ONLY
    xi_tilde: CriticalEnergy
    eps: float
    samples: list[BoundarySample] = field(default_factory=list)
    coexistence: tuple[float, float] = (0.0, 0.0)


@dataclass
class FrequencyResponsePoint:
    _: KW_ONLY
    sigma: float
    xi: AveragedEnergy
    branch: Branch
    at_jump: bool = False
    reached: bool = False


@dataclass
class JumpSample:
    _: KW_ONLY
    sigma: float
    branch: Mechanism
    xi_plus: AveragedEnergy


def f_m(sigma: float, xi, eps: float = DEFAULT_EPS):
    """
    Forcing at which C(0, xi) = 0, i.e. the amplitude for which the LPT
    touches xi on nu = 0. Negative where the touch happens on nu = pi.
    """
    x = np.asarray(xi, dtype=float)
    res = (
        2.0
        * (x - (1.0 + eps * sigma) * np.asarray(aa.averaged_action(x)))
        / (eps * np.asarray(aa.a1(x)))
    )
    return float(res) if np.ndim(xi) == 0 else res


def boundary_maximum(
    sigma: float, xi_tilde: float, eps: float = DEFAULT_EPS
) -> float:
    """
    Critical amplitude of the maximum mechanism.

    Up to and including the wall energy the linear inversion sqrt(2 xi)|sigma|
    is used; above it the amplitude follows from C(0, xi_tilde) = 0.
    """
    xi_tilde = CriticalEnergy(xi_tilde)
    if xi_tilde <= XI_WALL:
        return math.sqrt(2.0 * xi_tilde) * abs(sigma)

    value = f_m(sigma, float(xi_tilde), eps)
    if value < 0:
        raise MechanismNotApplicableError(sigma, float(xi_tilde), value)
    return value


def boundary_saddle(sigma: float, eps: float = DEFAULT_EPS) -> float:
    """
    Critical amplitude of the saddle mechanism, the forcing for which the
    LPT runs through (pi, 1/2). It equals sigma.
    """
    if not sigma > 0:
        raise BranchOutOfRangeError(sigma, Mechanism.Saddle.value)

    value = -f_m(sigma, XI_WALL, eps)
    assert math.isclose(value, sigma, rel_tol=1e-12, abs_tol=1e-12), (
        value,
        sigma,
    )
    return value


def coexistence_point(
    xi_tilde: float, eps: float = DEFAULT_EPS
) -> tuple[float, float]:
    """
    (sigma*, f*) where both mechanisms give the same amplitude.
    """
    xi_tilde = CriticalEnergy(xi_tilde)
    if xi_tilde < XI_WALL:
        raise ValueError(f"coexistence needs xi_tilde >= {XI_WALL}, got {xi_tilde}")

    a = float(aa.a1(float(xi_tilde)))
    j = float(aa.averaged_action(float(xi_tilde)))
    sigma_star = ((a + 2 * xi_tilde) / (a + 2 * j) - 1.0) / eps
    f_star = sigma_star

    if not xi_tilde.is_type_one:
        f_max = boundary_maximum(sigma_star, xi_tilde, eps)
        assert math.isclose(f_max, f_star, rel_tol=1e-6, abs_tol=1e-6), (
            f_max,
            f_star,
        )
    return sigma_star, f_star


def linear_exact_boundary(
    sigma: float, xi_tilde: float = XI_WALL, eps: float = DEFAULT_EPS
) -> float:
    """
    Type-I amplitude predicted by the exact impact-free solution from rest.

    The beating response has peak energy f^2 / (2 sigma^2) and first touches
    a wall once 2F/|1 - Omega^2| = 1, i.e. at f = |sigma (1 + eps sigma / 2)|.
    """
    xi_tilde = CriticalEnergy(xi_tilde)
    if xi_tilde > XI_WALL:
        raise ValueError(f"only defined up to xi_tilde = {XI_WALL}, got {xi_tilde}")
    return min(
        math.sqrt(2.0 * xi_tilde) * abs(sigma),
        abs(sigma * (1.0 + 0.5 * eps * sigma)),
    )


@time_me(__name__)
def transition_boundary(
    xi_tilde: float, sigmas, eps: float = DEFAULT_EPS
) -> TransitionBoundary:
    xi_tilde = CriticalEnergy(xi_tilde)
    result = TransitionBoundary(xi_tilde=xi_tilde, eps=eps)

    if xi_tilde <= XI_WALL:
        result.coexistence = (0.0, 0.0)
        for sigma in np.asarray(sigmas, dtype=float):
            f = boundary_maximum(float(sigma), xi_tilde, eps)
            result.samples.append(
                BoundarySample(
                    sigma=float(sigma),
                    f_crit=f,
                    mechanism=Mechanism.Maximum,
                    f_maximum=f,
                )
            )
        return result

    sigma_star, f_star = coexistence_point(xi_tilde, eps)
    result.coexistence = (sigma_star, f_star)

    for sigma in np.asarray(sigmas, dtype=float):
        s = float(sigma)
        try:
            # reaching any level above the wall needs the type-I crossing first
            f_max: Optional[float] = max(boundary_maximum(s, xi_tilde, eps), abs(s))
        except MechanismNotApplicableError as e:
            logger.debug("skipping maximum branch: %r", e)
            f_max = None
        f_sad = boundary_saddle(s, eps) if s > 0 else None

        if s <= sigma_star:
            if f_max is None:
                logger.warning("maximum mechanism not applicable at sigma=%g", s)
                continue
            sample = BoundarySample(
                sigma=s,
                f_crit=f_max,
                mechanism=Mechanism.Maximum,
                f_maximum=f_max,
                f_saddle=f_sad,
            )
        else:
            assert f_sad is not None
            sample = BoundarySample(
                sigma=s,
                f_crit=f_sad,
                mechanism=Mechanism.Saddle,
                f_maximum=f_max,
                f_saddle=f_sad,
            )
        result.samples.append(sample)

    return result


def _hvi_grid(xi_cap: float, scan_step: float) -> np.ndarray:
    return roots.scan_grid(XI_WALL, xi_cap, scan_step, refine_to=XI_START)


def post_crossing_energy(
    sigma: float,
    eps: float = DEFAULT_EPS,
    branch: Mechanism = Mechanism.Saddle,
    *,
    xi_cap: float = XI_CAP,
    scan_step: float = 5e-3,
    xtol: float = 1e-12,
) -> AveragedEnergy:
    """
    Energy level reached right after crossing the type-I boundary f = |sigma|.

    On the saddle branch (sigma > 0) this is the root of f_m = sigma, on the
    maximum branch (sigma < 0) the root of f_m = -sigma, both taken as the
    first root above 1/2.
    """
    match branch:
        case Mechanism.Saddle:
            if not sigma > 0:
                raise BranchOutOfRangeError(sigma, branch.value)
            target = sigma
        case Mechanism.Maximum:
            if not sigma < 0:
                raise BranchOutOfRangeError(sigma, branch.value)
            target = -sigma
        case _:
            raise ValueError(f"unknown branch {branch}")

    return roots.first_root(
        lambda x: f_m(sigma, x, eps) - target,
        _hvi_grid(xi_cap, scan_step),
        f"post-crossing energy ({branch.value}, sigma={sigma})",
        xtol,
    )


def post_crossing_curve(
    sigmas, eps: float = DEFAULT_EPS, **kwargs
) -> list[JumpSample]:
    """
    Post-crossing energies on both branches; sigma < 0 uses the maximum
    branch, sigma > 0 the saddle branch, sigma = 0 is skipped.
    """
    result = []
    for sigma in np.asarray(sigmas, dtype=float):
        s = float(sigma)
        if s == 0.0:
            continue
        branch = Mechanism.Saddle if s > 0 else Mechanism.Maximum
        try:
            xi_plus = post_crossing_energy(s, eps, branch, **kwargs)
        except BracketError as e:
            logger.warning("%r", e)
            continue
        result.append(JumpSample(sigma=s, branch=branch, xi_plus=xi_plus))
    return result


def jump_asymptote(xi_cap: float = 2.0, xtol: float = 1e-12) -> AveragedEnergy:
    """
    Limit of the maximum-branch post-crossing energy as sigma -> -inf, the
    root of 2 J(xi) = a1(xi) above 1/2.
    """
    return roots.first_root(
        lambda x: 2.0 * np.asarray(aa.averaged_action(x)) - np.asarray(aa.a1(x)),
        _hvi_grid(xi_cap, 1e-3),
        "2 J - a1",
        xtol,
    )


def energy_map(
    sigma: float,
    f: float,
    eps: float = DEFAULT_EPS,
    *,
    verify: bool = False,
    xi_cap: float = XI_CAP,
    scan_step: float = 5e-3,
    xtol: float = 1e-12,
    crosscheck_tol: float = 5e-2,
    **lpt_kwargs,
) -> AveragedEnergy:
    """
    Maximal averaged energy reached from rest for forcing (sigma, f).

    The LPT obeys cos(nu) = f_m(sigma|xi) / f, so its top is the first
    energy where |f_m| = f. Below the wall energy that is f^2 / (2 sigma^2);
    once the LPT crosses 1/2 (f > |sigma|) the first root above the wall is
    taken. With `verify` the value is compared to the level-set maximum.
    """
    if not f >= 0:
        raise ValueError(f"f must be non-negative, got {f}")

    if f == 0.0:
        xi = 0.0
    elif f <= abs(sigma):
        xi = f**2 / (2.0 * sigma**2)
    else:
        xi = roots.first_root(
            lambda x: np.abs(f_m(sigma, x, eps)) - f,
            _hvi_grid(xi_cap, scan_step),
            f"maximal energy (sigma={sigma}, f={f})",
            xtol,
        )

    if verify:
        level_set = lpt_max_energy(sigma, f, eps, **lpt_kwargs)
        if abs(level_set - xi) > crosscheck_tol:
            raise NonConvergenceError(
                f"energy map at sigma={sigma}, f={f}", xi, level_set, crosscheck_tol
            )
    return xi


def lpt_max_energy(
    sigma: float,
    f: float,
    eps: float = DEFAULT_EPS,
    *,
    nu_samples: int = 512,
    xi_max: float = 6.0,
    xi_step: float = 2e-3,
    max_doublings: int = 4,
) -> AveragedEnergy:
    """
    Top of the level-set LPT, enlarging the window while the contour
    escapes it.
    """
    forcing = rm.ScaledForcing(eps=eps, f=f, sigma=sigma)
    for _ in range(max_doublings + 1):
        try:
            return rm.lpt_contour(
                forcing, nu_samples, xi_max, xi_step=xi_step
            ).max_xi
        except LPTEscapeError:
            logger.warning(
                "LPT escapes xi_max=%g at sigma=%g f=%g, enlarging window",
                xi_max,
                sigma,
                f,
            )
            xi_max *= 2
    raise LPTEscapeError(xi_max / 2)


def energy_map_grid(sigmas, fs, eps: float = DEFAULT_EPS, **kwargs) -> np.ndarray:
    """
    energy_map on the mesh fs x sigmas, shape (len(fs), len(sigmas)).
    """
    sigmas = np.asarray(sigmas, dtype=float)
    fs = np.asarray(fs, dtype=float)
    out = np.empty((fs.size, sigmas.size))
    for i, f in enumerate(fs):
        for j, s in enumerate(sigmas):
            out[i, j] = energy_map(float(s), float(f), eps, **kwargs)
    return out


def frequency_response(
    f: float,
    eps: float = DEFAULT_EPS,
    sigma_range: tuple[float, float] = (-3.0, 3.0),
    n_samples: int = 301,
    *,
    xi_cap: float = 10.0,
    scan_step: float = 5e-3,
    xtol: float = 1e-12,
) -> list[FrequencyResponsePoint]:
    """
    Energy levels xi with f = f_m(sigma|xi) for sigma on a grid.

    Linear points (|sigma| >= f) carry f^2 / (2 sigma^2), HVI points are all
    roots above the wall. The detunings sigma = +-f are always sampled and
    marked as jumps. `reached` flags the level attained from rest.
    """
    if not f > 0:
        raise ValueError(f"f must be positive, got {f}")

    lo, hi = sigma_range
    sigmas = np.linspace(lo, hi, n_samples)
    extra = [s for s in (-f, f) if lo <= s <= hi]
    sigmas = np.unique(np.concatenate([sigmas, extra]))
    grid = _hvi_grid(xi_cap, scan_step)

    points: list[FrequencyResponsePoint] = []
    for sigma in sigmas:
        s = float(sigma)
        at_jump = math.isclose(abs(s), f, rel_tol=1e-12, abs_tol=1e-12)
        reached = energy_map(s, f, eps, xi_cap=xi_cap, scan_step=scan_step)

        if abs(s) >= f:
            xi = XI_WALL if at_jump else min(f**2 / (2.0 * s**2), XI_WALL)
            points.append(
                FrequencyResponsePoint(
                    sigma=s,
                    xi=xi,
                    branch=Branch.Linear,
                    at_jump=at_jump,
                    reached=math.isclose(xi, reached, abs_tol=1e-9),
                )
            )

        branch = Branch.HVISaddle if s > 0 else Branch.HVIMax
        for xi in roots.all_roots(lambda x: f_m(s, x, eps) - f, grid, xtol):
            points.append(
                FrequencyResponsePoint(
                    sigma=s,
                    xi=xi,
                    branch=branch,
                    at_jump=at_jump,
                    reached=math.isclose(xi, reached, abs_tol=1e-9),
                )
            )
    return points
