"""
Event driven simulation of q'' + q = F cos(Omega tau) between rigid walls at
|q| = 1 with elastic impacts.

Between impacts the motion is the closed-form solution of the forced linear
oscillator. Impact times are bracketed on a dense grid along the segment and
refined with Brent's method, the velocity is then reversed.
"""
import enum
import logging
import math
from dataclasses import KW_ONLY, dataclass, field
from typing import Optional

import numpy as np
import pandas as pd
from scipy import integrate, optimize

from hvi.log import time_me

from . import action_angle as aa
from .base import (
    XI_WALL,
    ChatterError,
    InvalidBracketError,
    InvalidSimConfigError,
    WindowTooLongError,
)

logger = logging.getLogger(__name__)

TWO_PI = 2 * math.pi

MAX_IMPACTS = 10_000_000
GRAZE_TOL = 1e-12
RESONANCE_TOL = 1e-8
IMPACT_XTOL = 1e-12

# number of grid points evaluated at once while looking for a wall contact
SCAN_CHUNK = 1024


class Estimator(enum.Enum):  # TODO: make StrEnum in python 3.11
    Instantaneous = "instantaneous"
    Windowed = "windowed"


@dataclass
class SimConfig:
    _: KW_ONLY
    F: float
    Omega: float
    kappa: float = 1.0
    q0: float = 0.0
    p0: float = 0.0
    horizon: float = 500.0
    dt_out: float = 0.01

    def __post_init__(self):
        if not self.F >= 0:
            raise InvalidSimConfigError("F", f"must be non-negative, got {self.F}")
        if not self.Omega > 0:
            raise InvalidSimConfigError("Omega", f"must be positive, got {self.Omega}")
        if self.kappa != 1.0:
            raise InvalidSimConfigError("kappa", "only elastic impacts (1) supported")
        if not abs(self.q0) <= 1.0:
            raise InvalidSimConfigError(
                "q0", f"must lie between the walls, got {self.q0}"
            )
        if not self.dt_out > 0:
            raise InvalidSimConfigError("dt_out", "must be positive")
        if not self.horizon >= TWO_PI / self.Omega:
            raise InvalidSimConfigError(
                "horizon", f"must cover one forcing period {TWO_PI / self.Omega:.6g}"
            )

    @property
    def E0(self) -> float:
        return 0.5 * (self.q0**2 + self.p0**2)


@dataclass
class Trajectory:
    _: KW_ONLY
    tau: np.ndarray
    q: np.ndarray
    p: np.ndarray
    impacts: np.ndarray = field(default_factory=lambda: np.empty(0))
    impact_velocities: np.ndarray = field(default_factory=lambda: np.empty(0))

    @property
    def E(self) -> np.ndarray:
        return 0.5 * (self.q**2 + self.p**2)

    @property
    def impact_energies(self) -> np.ndarray:
        return 0.5 * (1.0 + self.impact_velocities**2)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"tau": self.tau, "q": self.q, "p": self.p, "E": self.E})


@dataclass
class EnergySummary:
    _: KW_ONLY
    max_E_inst: float
    max_xi_windowed: float
    t_of_max: float
    crossed: bool = False
    t_cross: Optional[float] = None
    estimator: Estimator = Estimator.Instantaneous


def normalize(
    m: float, k: float, d: float, F_dim: float, omega_dim: float, **kwargs
) -> SimConfig:
    """
    Non-dimensional configuration for mass m, stiffness k, half gap d and a
    force F_dim cos(omega_dim t).
    """
    for name, value in (("m", m), ("k", k), ("d", d)):
        if not value > 0:
            raise InvalidSimConfigError(name, f"must be positive, got {value}")
    return SimConfig(F=F_dim / (k * d), Omega=omega_dim * math.sqrt(m / k), **kwargs)


@dataclass(frozen=True)
class Segment:
    """
    Impact-free solution started at (tau0, q0, p0).
    """

    F: float
    Omega: float
    tau0: float
    c1: float
    c2: float
    resonant: bool

    @classmethod
    def start(
        cls,
        F: float,
        Omega: float,
        tau0: float,
        q0: float,
        p0: float,
        resonance_tol: float = RESONANCE_TOL,
    ) -> "Segment":
        resonant = abs(Omega - 1.0) < resonance_tol
        seg = cls(F, Omega, tau0, 0.0, 0.0, resonant)
        qp, pp = seg.particular(tau0)
        return cls(F, Omega, tau0, q0 - float(qp), p0 - float(pp), resonant)

    def particular(self, tau):
        tau = np.asarray(tau, dtype=float)
        if self.resonant:
            half = 0.5 * self.F
            return half * tau * np.sin(tau), half * (np.sin(tau) + tau * np.cos(tau))
        amp = self.F / (1.0 - self.Omega**2)
        return (
            amp * np.cos(self.Omega * tau),
            -amp * self.Omega * np.sin(self.Omega * tau),
        )

    def state(self, tau) -> tuple[np.ndarray, np.ndarray]:
        tau = np.asarray(tau, dtype=float)
        s = tau - self.tau0
        c, sn = np.cos(s), np.sin(s)
        qp, pp = self.particular(tau)
        return self.c1 * c + self.c2 * sn + qp, -self.c1 * sn + self.c2 * c + pp

    def q(self, tau: float) -> float:
        return float(self.state(tau)[0])

    def p(self, tau: float) -> float:
        return float(self.state(tau)[1])

    def next_contact(
        self, tau: float, horizon: float, step: float
    ) -> Optional[float]:
        """
        First time after `tau` and up to `horizon` at which |q| reaches 1.
        """
        t = tau
        while t < horizon:
            grid = t + step * np.arange(SCAN_CHUNK + 1)
            if grid[-1] >= horizon:
                grid = np.append(grid[grid < horizon], horizon)
            q, p = self.state(grid)
            bracket = self._first_bracket(grid, q, p, step)
            if bracket is not None:
                return self._refine(*bracket)
            t = float(grid[-1])
        return None

    def _first_bracket(
        self, grid: np.ndarray, q: np.ndarray, p: np.ndarray, step: float
    ) -> Optional[tuple[float, float]]:
        outside = np.flatnonzero(np.abs(q[1:]) >= 1.0)
        k = int(outside[0]) + 1 if outside.size else None
        limit = k if k is not None else len(grid) - 1

        # an excursion past the wall between two grid points shows up as a
        # turning point close to it
        near = 1.0 - (1.0 + self.F) * step**2
        peak = np.maximum(np.abs(q[:-1]), np.abs(q[1:]))
        turns = np.flatnonzero((p[:-1] * p[1:] < 0) & (peak > near))
        for i in turns[turns < limit]:
            t_ext = float(optimize.brentq(self.p, grid[i], grid[i + 1]))
            if abs(self.q(t_ext)) >= 1.0:
                return float(grid[i]), t_ext

        if k is not None:
            return float(grid[k - 1]), float(grid[k])
        return None

    def _refine(self, a: float, b: float) -> float:
        s = math.copysign(1.0, self.q(b))

        def g(t: float) -> float:
            return s * self.q(t) - 1.0

        if g(a) >= 0:
            # left the wall with almost no speed and turned back towards it
            if self.p(a) * self.p(b) < 0:
                a = float(optimize.brentq(self.p, a, b))
            if g(a) >= 0:
                return a

        t = float(optimize.brentq(g, a, b, xtol=IMPACT_XTOL))
        slope = s * self.p(t)
        if abs(slope) > 1e-8:
            polished = t - g(t) / slope
            if a <= polished <= b:
                t = polished
        return t


def _output_times(horizon: float, dt_out: float) -> np.ndarray:
    n = int(math.floor(horizon / dt_out + 1e-9)) + 1
    tau = dt_out * np.arange(n)
    if tau[-1] < horizon - 1e-12:
        tau = np.append(tau, horizon)
    return tau


@time_me(__name__)
def simulate(
    cfg: SimConfig,
    *,
    max_impacts: int = MAX_IMPACTS,
    graze_tol: float = GRAZE_TOL,
    resonance_tol: float = RESONANCE_TOL,
) -> Trajectory:
    """
    Integrates from (q0, p0) at tau = 0 up to the horizon.

    Contacts with |p| < graze_tol are grazes and do not reverse the velocity.
    """
    period = TWO_PI / max(1.0, cfg.Omega)
    step = min(0.01, period / 100)

    out_tau = _output_times(cfg.horizon, cfg.dt_out)
    out_q = np.empty_like(out_tau)
    out_p = np.empty_like(out_tau)
    filled = 0

    impacts: list[float] = []
    velocities: list[float] = []

    q0, p0 = cfg.q0, cfg.p0
    if abs(q0) == 1.0 and q0 * p0 > 0:
        impacts.append(0.0)
        velocities.append(p0)
        p0 = -p0

    seg = Segment.start(cfg.F, cfg.Omega, 0.0, q0, p0, resonance_tol)
    tau = 0.0
    while True:
        t_hit = seg.next_contact(tau, cfg.horizon, step)

        end = len(out_tau) if t_hit is None else int(np.searchsorted(out_tau, t_hit))
        if end > filled:
            out_q[filled:end], out_p[filled:end] = seg.state(out_tau[filled:end])
            filled = end
        if t_hit is None:
            break

        if impacts and t_hit <= tau:
            # stuck on the wall, impacts accumulate without time advancing
            raise ChatterError(len(impacts), t_hit)

        q_hit, p_hit = seg.q(t_hit), seg.p(t_hit)
        if abs(p_hit) < graze_tol:
            logger.warning("grazing contact at tau=%.12g, not reflected", t_hit)
            tau = t_hit + step * 1e-3
            continue

        impacts.append(t_hit)
        velocities.append(p_hit)
        if len(impacts) > max_impacts:
            raise ChatterError(max_impacts, t_hit)

        seg = Segment.start(
            cfg.F, cfg.Omega, t_hit, math.copysign(1.0, q_hit), -p_hit, resonance_tol
        )
        tau = t_hit

    logger.debug(
        "simulated F=%g Omega=%g up to %g: %d impacts",
        cfg.F,
        cfg.Omega,
        cfg.horizon,
        len(impacts),
    )
    return Trajectory(
        tau=out_tau,
        q=out_q,
        p=out_p,
        impacts=np.asarray(impacts),
        impact_velocities=np.asarray(velocities),
    )


def _first_at_or_above(tau: np.ndarray, values: np.ndarray, level: float):
    hit = np.flatnonzero(values >= level)
    return float(tau[hit[0]]) if hit.size else None


def energy_summary(
    traj: Trajectory,
    Omega: float,
    xi_threshold: Optional[float] = None,
    estimator: Estimator = Estimator.Instantaneous,
) -> EnergySummary:
    """
    Maximal instantaneous energy and maximal one-period running mean of E.

    `crossed` and `t_cross` refer to the selected estimator. The running mean
    is assigned to the end of its window.
    """
    window = TWO_PI / Omega
    tau, E = traj.tau, traj.E
    span = float(tau[-1] - tau[0])
    if window > span:
        raise WindowTooLongError(window, span)

    cum = integrate.cumulative_trapezoid(E, tau, initial=0.0)
    ends = tau >= tau[0] + window
    t_end = tau[ends]
    mean = (cum[ends] - np.interp(t_end - window, tau, cum)) / window

    inst_tau = np.concatenate([tau, traj.impacts])
    inst_E = np.concatenate([E, traj.impact_energies])
    order = np.argsort(inst_tau, kind="stable")
    inst_tau, inst_E = inst_tau[order], inst_E[order]

    summary = EnergySummary(
        max_E_inst=float(inst_E.max()),
        max_xi_windowed=float(mean.max()),
        t_of_max=0.0,
        estimator=estimator,
    )

    match estimator:
        case Estimator.Instantaneous:
            series_tau, series = inst_tau, inst_E
        case Estimator.Windowed:
            series_tau, series = t_end, mean
        case _:
            raise ValueError(f"unknown estimator {estimator}")

    summary.t_of_max = float(series_tau[int(np.argmax(series))])
    if xi_threshold is not None:
        summary.t_cross = _first_at_or_above(series_tau, series, xi_threshold)
        summary.crossed = summary.t_cross is not None
    return summary


def crosses(
    sigma: float,
    f: float,
    eps: float,
    xi_tilde: float,
    horizon: float,
    *,
    estimator: Estimator = Estimator.Instantaneous,
    dt_out: float = 0.01,
) -> bool:
    """
    Whether the response from rest to forcing (sigma, f) reaches xi_tilde.
    """
    Omega = 1.0 + eps * sigma
    traj = simulate(SimConfig(F=eps * f, Omega=Omega, horizon=horizon, dt_out=dt_out))
    return energy_summary(traj, Omega, xi_tilde, estimator).crossed


@time_me(__name__)
def numeric_boundary(
    sigma: float,
    eps: float,
    xi_tilde: float,
    f_lo: float,
    f_hi: float,
    horizon: float = 500.0,
    *,
    width: float = 1e-3,
    estimator: Estimator = Estimator.Instantaneous,
    dt_out: float = 0.01,
) -> float:
    """
    Critical forcing amplitude from time-domain runs, bisected on f until the
    bracket is narrower than `width`.
    """
    if not f_lo < f_hi:
        raise InvalidBracketError(f_lo, f_hi, "lower end must be below upper", sigma)

    def probe(f: float) -> bool:
        return crosses(
            sigma, f, eps, xi_tilde, horizon, estimator=estimator, dt_out=dt_out
        )

    if probe(f_lo):
        raise InvalidBracketError(f_lo, f_hi, "lower end already crosses", sigma)
    if not probe(f_hi):
        raise InvalidBracketError(f_lo, f_hi, "upper end does not cross", sigma)

    lo, hi = f_lo, f_hi
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        if probe(mid):
            hi = mid
        else:
            lo = mid

    logger.debug(
        "numeric boundary sigma=%g xi=%g: f in [%g, %g]", sigma, xi_tilde, lo, hi
    )
    return 0.5 * (lo + hi)


def reference_segment(
    F: float,
    Omega: float,
    tau0: float,
    q0: float,
    p0: float,
    taus: np.ndarray,
    rtol: float = 1e-12,
    atol: float = 1e-14,
) -> tuple[np.ndarray, np.ndarray]:
    """
    Impact-free motion integrated numerically (DOP853), evaluated at `taus`.
    """

    def rhs(t, y):
        return [y[1], -y[0] + F * math.cos(Omega * t)]

    taus = np.asarray(taus, dtype=float)
    sol = integrate.solve_ivp(
        rhs,
        (tau0, float(taus[-1])),
        [q0, p0],
        method="DOP853",
        t_eval=taus,
        rtol=rtol,
        atol=atol,
    )
    if not sol.success:
        raise RuntimeError(sol.message)
    return sol.y[0], sol.y[1]


def free_impact_interval(E: float) -> float:
    """
    Time between consecutive impacts of unforced motion at energy E >= 1/2.
    """
    if E < XI_WALL:
        raise ValueError(f"free motion below {XI_WALL} does not impact, got E={E}")
    return math.pi / float(aa.frequency(E))
