"""
The resonance manifold: the slow-flow conservation law

    C(nu, xi) = xi - (eps f / 2) a1(xi) cos(nu) - (1 + eps sigma) J(xi)

on the phase cylinder nu in [0, 2 pi), xi >= 0, its limiting phase trajectory
(the level set C = 0 leaving the rest state xi = 0) and its stationary
points.
"""
import enum
import logging
import math
from collections import deque
from dataclasses import KW_ONLY, dataclass, field
from typing import Optional

import numpy as np
from scipy import optimize

from hvi.log import time_me

from . import action_angle as aa
from . import roots
from .base import (
    XI_WALL,
    AveragedEnergy,
    LPTEscapeError,
    Side,
    SingularLocusError,
)

logger = logging.getLogger(__name__)

TWO_PI = 2 * math.pi

DEFAULT_EPS = 0.1


class StationaryKind(enum.Enum):  # TODO: make StrEnum in python 3.11
    Saddle = "saddle"
    Minimum = "minimum"
    Maximum = "maximum"


@dataclass(frozen=True)
class ScaledForcing:
    """
    Forcing in the scaled coordinates F = eps f, Omega = 1 + eps sigma.
    """

    _: KW_ONLY
    eps: float = DEFAULT_EPS
    f: float
    sigma: float

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError(f"eps must be positive, got {self.eps}")
        if not self.f >= 0:
            raise ValueError(f"f must be non-negative, got {self.f}")

    @property
    def F(self) -> float:
        return self.eps * self.f

    @property
    def Omega(self) -> float:
        return 1.0 + self.eps * self.sigma


@dataclass
class PhasePoint:
    nu: float
    xi: AveragedEnergy

    def __post_init__(self):
        self.nu = self.nu % TWO_PI


@dataclass
class StationaryPoint:
    _: KW_ONLY
    nu0: float
    xi0: AveragedEnergy
    kind: StationaryKind
    degenerate: bool = False


@dataclass
class LPTContour:
    _: KW_ONLY
    points: list[PhasePoint] = field(default_factory=list)
    max_xi: AveragedEnergy = 0.0
    passes_saddle: bool = False

    @property
    def nu(self) -> np.ndarray:
        return np.array([p.nu for p in self.points])

    @property
    def xi(self) -> np.ndarray:
        return np.array([p.xi for p in self.points])


@dataclass
class LocusSample:
    _: KW_ONLY
    xi0: AveragedEnergy
    sigma: float
    f: float
    nu0: float
    kind: StationaryKind


def conservation(nu, xi, forcing: ScaledForcing) -> np.ndarray:
    """
    C evaluated elementwise (broadcasting nu against xi).
    """
    nu = np.asarray(nu, dtype=float)
    xi = np.asarray(xi, dtype=float)
    return (
        xi
        - 0.5 * forcing.eps * forcing.f * np.asarray(aa.a1(xi)) * np.cos(nu)
        - forcing.Omega * np.asarray(aa.averaged_action(xi))
    )


def manifold_value(p: PhasePoint, forcing: ScaledForcing) -> float:
    return float(conservation(p.nu, p.xi, forcing))


def manifold_grid(nu: np.ndarray, xi: np.ndarray, forcing: ScaledForcing) -> np.ndarray:
    """
    C on the mesh xi x nu, shape (len(xi), len(nu)).
    """
    return conservation(np.asarray(nu)[None, :], np.asarray(xi)[:, None], forcing)


def dC_dnu(nu, xi, forcing: ScaledForcing):
    return 0.5 * forcing.eps * forcing.f * np.asarray(aa.a1(xi)) * np.sin(nu)


def dC_dxi(nu, xi, forcing: ScaledForcing, side: Optional[Side] = None):
    return (
        1.0
        - 0.5 * forcing.eps * forcing.f * np.cos(nu) * np.asarray(aa.d_a1(xi, side))
        - forcing.Omega / np.asarray(aa.frequency(xi))
    )


def second_partials(p: StationaryPoint, forcing: ScaledForcing) -> tuple[float, float]:
    """
    (d2C/dnu2, d2C/dxi2) at a point on nu0 in {0, pi}, where the mixed
    partial vanishes.
    """
    c = math.cos(p.nu0)
    c_nunu = 0.5 * forcing.eps * forcing.f * float(aa.a1(p.xi0)) * c
    c_xixi = -0.5 * forcing.eps * forcing.f * c * aa.d2_a1(
        p.xi0
    ) - forcing.Omega * float(aa.d2_averaged_action(p.xi0))
    return c_nunu, c_xixi


def classify_stationary(
    p: StationaryPoint,
    forcing: ScaledForcing,
    *,
    xtol: float = 1e-12,
    residual_tol: float = 1e-9,
) -> StationaryKind:
    """
    Saddle if the pure second partials have opposite signs, minimum if both
    are positive, maximum if both are negative. The kink point xi0 = 1/2 on
    nu0 = pi is a saddle.
    """
    if p.xi0 == XI_WALL:
        return StationaryKind.Saddle

    c_nunu, c_xixi = second_partials(p, forcing)
    residual = abs(float(dC_dxi(p.nu0, p.xi0, forcing)))
    # a root known to xtol in xi carries a residual of up to |C_xixi| xtol
    if residual > residual_tol + 10 * abs(c_xixi) * xtol:
        raise ValueError(
            f"({p.nu0}, {p.xi0}) is not a stationary point, dC/dxi={residual:.3g}"
        )

    if c_nunu > 0 and c_xixi > 0:
        return StationaryKind.Minimum
    if c_nunu < 0 and c_xixi < 0:
        return StationaryKind.Maximum
    return StationaryKind.Saddle


def _line_roots(
    nu0: float,
    forcing: ScaledForcing,
    xi_window: float,
    grid_step: float,
    xtol: float,
    tangent_tol: float,
) -> list[tuple[float, bool]]:
    """
    Roots of dC/dxi(nu0, .) on (0, xi_window) as (xi0, is_double_root).
    The kink at the wall energy is never bracketed.
    """

    def g(x: np.ndarray) -> np.ndarray:
        return np.asarray(dC_dxi(nu0, x, forcing), dtype=float)

    def g_scalar(x: float) -> float:
        return float(dC_dxi(nu0, x, forcing))

    found: list[tuple[float, bool]] = []

    linear_grid = np.geomspace(1e-12, XI_WALL * (1 - 1e-12), 400)
    found += [(x, False) for x in roots.all_roots(g, linear_grid, xtol)]

    grid = roots.scan_grid(XI_WALL, xi_window, grid_step, refine_to=1e-10)
    values = g(grid)
    found += [(x, False) for x in roots.all_roots(g, grid, xtol)]

    # pairs of roots closer than the grid spacing show up as a dip of |g|
    mag = np.abs(values)
    changes = set(roots.sign_changes(values)) | set(roots.sign_changes(values) + 1)
    for i in range(1, len(grid) - 1):
        if not (mag[i] < mag[i - 1] and mag[i] <= mag[i + 1]):
            continue
        if i in changes or (i - 1) in changes:
            continue
        s = math.copysign(1.0, values[i])
        lo, hi = float(grid[i - 1]), float(grid[i + 1])
        res = optimize.minimize_scalar(
            lambda x: s * g_scalar(x),
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": xtol},
        )
        x_ext = float(res.x)
        g_ext = g_scalar(x_ext)
        if math.copysign(1.0, g_ext) != s and g_ext != 0.0:
            found.append((roots.refine(g_scalar, lo, x_ext, xtol), False))
            found.append((roots.refine(g_scalar, x_ext, hi, xtol), False))
        elif abs(g_ext) < tangent_tol:
            found.append((x_ext, True))

    return sorted(found)


@time_me(__name__)
def stationary_points(
    forcing: ScaledForcing,
    xi_window: float = 4.0,
    *,
    grid_step: float = 1e-3,
    xtol: float = 1e-12,
    tangent_tol: float = 1e-9,
    degenerate_tol: float = 1e-8,
) -> list[StationaryPoint]:
    """
    Stationary points on the lines nu0 = 0 and nu0 = pi with xi0 below
    `xi_window`, classified. The degenerate saddle (pi, 1/2) is always
    part of the result.
    """
    if not xi_window > XI_WALL:
        raise ValueError(f"xi_window must exceed {XI_WALL}, got {xi_window}")

    points: list[StationaryPoint] = []
    for nu0 in (0.0, math.pi):
        for xi0, double in _line_roots(
            nu0, forcing, xi_window, grid_step, xtol, tangent_tol
        ):
            p = StationaryPoint(nu0=nu0, xi0=xi0, kind=StationaryKind.Saddle)
            c_nunu, c_xixi = second_partials(p, forcing)
            p.kind = classify_stationary(p, forcing, xtol=xtol)
            p.degenerate = (
                double or abs(c_xixi) < degenerate_tol or abs(c_nunu) < degenerate_tol
            )
            points.append(p)

    points.append(
        StationaryPoint(
            nu0=math.pi, xi0=XI_WALL, kind=StationaryKind.Saddle, degenerate=True
        )
    )
    points.sort(key=lambda p: (p.nu0, p.xi0))
    logger.debug(
        "%d stationary points for sigma=%g f=%g", len(points), forcing.sigma, forcing.f
    )
    return points


def _locus_parts(xi0: float) -> tuple[float, float]:
    a = float(aa.a1(xi0))
    da = float(aa.d_a1(xi0))
    j = float(aa.averaged_action(xi0))
    dj = float(aa.d_averaged_action(xi0))
    return a - da * xi0, a * dj - da * j


def sigma_of_stationary(xi0: AveragedEnergy, eps: float = DEFAULT_EPS) -> float:
    """
    Detuning at which (pi, xi0) is a stationary point lying on the limiting
    phase trajectory, with the forcing eliminated.
    """
    if not xi0 > XI_WALL:
        raise ValueError(f"xi0 must exceed {XI_WALL}, got {xi0}")
    num, den = _locus_parts(xi0)
    if abs(den) < 1e-14:
        raise SingularLocusError(xi0)
    return (num / den - 1.0) / eps


def locus_forcing(xi0: AveragedEnergy, sigma: float, eps: float = DEFAULT_EPS) -> float:
    """
    Forcing for which C(pi, xi0) = 0. Negative values mean the point sits
    on nu0 = 0 with forcing |f|.
    """
    return (
        2.0
        * ((1.0 + eps * sigma) * float(aa.averaged_action(xi0)) - xi0)
        / (eps * float(aa.a1(xi0)))
    )


def locus_asymptote(upper: float = 1.0) -> float:
    """
    Energy of the vertical asymptote of the stationary locus, where
    a1 J' - a1' J vanishes. It does not depend on eps.
    """

    def den(x: np.ndarray) -> np.ndarray:
        return np.asarray(aa.a1(x)) * np.asarray(aa.d_averaged_action(x)) - np.asarray(
            aa.d_a1(x)
        ) * np.asarray(aa.averaged_action(x))

    grid = roots.scan_grid(XI_WALL, upper, 1e-3, refine_to=1e-10)
    return roots.first_root(den, grid, "a1 J' - a1' J")


def locus_fold(eps: float = DEFAULT_EPS, upper: float = 1.0) -> tuple[float, float]:
    """
    The branch point (sigma, xi0) of the stationary locus above its
    asymptote, i.e. the minimum of sigma_of_stationary there.
    """
    lower = locus_asymptote(upper) + 1e-4
    res = optimize.minimize_scalar(
        lambda x: sigma_of_stationary(x, eps),
        bounds=(lower, upper),
        method="bounded",
        options={"xatol": 1e-10},
    )
    return float(res.fun), float(res.x)


def stationary_locus(
    xi0_values: np.ndarray, eps: float = DEFAULT_EPS
) -> list[LocusSample]:
    samples = []
    for xi0 in np.asarray(xi0_values, dtype=float):
        try:
            sigma = sigma_of_stationary(float(xi0), eps)
        except SingularLocusError:
            logger.debug("skipping singular locus point xi0=%g", xi0)
            continue

        f = locus_forcing(float(xi0), sigma, eps)
        nu0 = math.pi if f >= 0 else 0.0
        forcing = ScaledForcing(eps=eps, f=abs(f), sigma=sigma)
        point = StationaryPoint(nu0=nu0, xi0=float(xi0), kind=StationaryKind.Saddle)
        c_nunu, c_xixi = second_partials(point, forcing)
        if c_nunu > 0 and c_xixi > 0:
            kind = StationaryKind.Minimum
        elif c_nunu < 0 and c_xixi < 0:
            kind = StationaryKind.Maximum
        else:
            kind = StationaryKind.Saddle

        samples.append(
            LocusSample(xi0=float(xi0), sigma=sigma, f=abs(f), nu0=nu0, kind=kind)
        )
    return samples


def _xi_grid(xi_max: float, xi_step: float) -> np.ndarray:
    return np.unique(
        np.concatenate(
            [
                np.geomspace(1e-9, 1e-3, 40),
                np.arange(1e-3, xi_max, xi_step),
                [XI_WALL, xi_max],
            ]
        )
    )


def _wrapped_distance(a: np.ndarray, b: float) -> np.ndarray:
    d = np.abs((a - b) % TWO_PI)
    return np.minimum(d, TWO_PI - d)


@time_me(__name__)
def lpt_contour(
    forcing: ScaledForcing,
    nu_samples: int = 512,
    xi_max: float = 6.0,
    *,
    xi_step: float = 2e-3,
    saddle_tol: float = 1e-3,
) -> LPTContour:
    """
    The limiting phase trajectory, i.e. the component of C = 0 attached to
    the rest state.

    C is sampled on a (xi, nu) grid that is periodic in nu. Cells whose edges
    carry a sign change are collected by a flood fill seeded on the lowest
    row, where the trajectory leaves xi = 0 at cos(nu) = 0. Every crossing
    edge of the component is bisected to a point on C = 0.
    """
    if nu_samples < 16:
        raise ValueError(f"nu_samples must be at least 16, got {nu_samples}")
    if not xi_max > 0:
        raise ValueError(f"xi_max must be positive, got {xi_max}")

    dnu = TWO_PI / nu_samples
    nu = (np.arange(nu_samples) + 0.5) * dnu

    if forcing.f == 0.0:
        return LPTContour(
            points=[PhasePoint(float(v), 0.0) for v in nu],
            max_xi=0.0,
            passes_saddle=False,
        )

    xi = _xi_grid(xi_max, xi_step)
    n, m = nu_samples, len(xi)
    pos = manifold_grid(nu, xi, forcing) > 0

    # h[i, j]: edge from (xi_i, nu_j) to (xi_i, nu_j+1), v[i, j]: from xi_i to xi_i+1
    h = pos != np.roll(pos, -1, axis=1)
    v = pos[:-1, :] != pos[1:, :]

    visited = np.zeros((m - 1, n), dtype=bool)
    queue = deque((0, j) for j in np.flatnonzero(h[0]))
    for cell in queue:
        visited[cell] = True

    while queue:
        i, j = queue.popleft()
        jr = (j + 1) % n
        if i == m - 2 and h[m - 1, j]:
            raise LPTEscapeError(xi_max)
        neighbours = []
        if h[i, j] and i > 0:
            neighbours.append((i - 1, j))
        if h[i + 1, j] and i < m - 2:
            neighbours.append((i + 1, j))
        if v[i, j]:
            neighbours.append((i, (j - 1) % n))
        if v[i, jr]:
            neighbours.append((i, jr))
        for cell in neighbours:
            if not visited[cell]:
                visited[cell] = True
                queue.append(cell)

    # crossing edges bounding the visited cells
    h_edges = np.zeros_like(h)
    h_edges[:-1] |= visited & h[:-1]
    h_edges[1:] |= visited & h[1:]
    v_edges = np.zeros_like(v)
    v_edges |= visited & v
    v_edges |= np.roll(visited, 1, axis=1) & v

    hi_, hj = np.nonzero(h_edges)
    vi, vj = np.nonzero(v_edges)

    # horizontal edges: fixed xi, bisect in nu
    h_xi = xi[hi_]
    h_nu, _ = roots.bisect_many(
        lambda k, x: conservation(x, h_xi[k], forcing),
        nu[hj],
        nu[hj] + dnu,
    )
    # vertical edges: fixed nu, bisect in xi
    v_nu = nu[vj]
    v_xi, _ = roots.bisect_many(
        lambda k, x: conservation(v_nu[k], x, forcing),
        xi[vi],
        xi[vi + 1],
    )

    all_nu = np.concatenate([h_nu, v_nu]) % TWO_PI
    all_xi = np.concatenate([h_xi, v_xi])
    order = np.lexsort((all_xi, all_nu))
    points = [PhasePoint(float(all_nu[k]), float(all_xi[k])) for k in order]

    max_xi = float(all_xi.max()) if all_xi.size else 0.0
    passes = _passes_saddle(all_nu, all_xi, forcing, xi_max, saddle_tol)

    logger.debug(
        "LPT sigma=%g f=%g: %d points, max xi %.6g, passes saddle %s",
        forcing.sigma,
        forcing.f,
        len(points),
        max_xi,
        passes,
    )
    return LPTContour(points=points, max_xi=max_xi, passes_saddle=passes)


def _passes_saddle(
    nu: np.ndarray,
    xi: np.ndarray,
    forcing: ScaledForcing,
    xi_max: float,
    saddle_tol: float,
) -> bool:
    if nu.size == 0:
        return False

    # the kink saddle at (pi, 1/2) is passed once the trajectory climbs past
    # the wall energy on its half of the cylinder
    near_pi = _wrapped_distance(nu, math.pi) < math.pi / 2
    if np.any(near_pi & (xi > XI_WALL)):
        return True

    window = max(xi_max, XI_WALL * 1.01)
    for s in stationary_points(forcing, window):
        if s.kind is not StationaryKind.Saddle:
            continue
        dist = np.hypot(_wrapped_distance(nu, s.nu0), xi - s.xi0)
        if float(dist.min()) < saddle_tol:
            return True
    return False
