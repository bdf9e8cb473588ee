"""
Action-angle quantities of the unforced oscillator in the truncated quadratic
well (walls at |q| = 1), expressed through the averaged energy xi.

Every function accepts a float or a numpy array. A float argument gives a
float result. Below the wall energy 1/2 the oscillator is linear
(J = xi, omega = 1). From 1/2 upward it impacts the walls.
"""
import logging
import math
from dataclasses import KW_ONLY, dataclass
from typing import Optional

import numpy as np
import numpy.typing as npt
from scipy import integrate, optimize

from .base import (
    WALL,
    XI_WALL,
    AveragedEnergy,
    EnergyOutOfRangeError,
    KinkError,
    NegativeEnergyError,
    Side,
)

logger = logging.getLogger(__name__)

FloatOrArray = float | npt.NDArray[np.float64]

# |omega - 1| below which sin(pi/omega)/(omega^2 - 1) is replaced by its series
OMEGA_SERIES_BAND = 1e-4

# series of h(omega) = 2 omega^2 sin(pi/omega) / (pi (omega^2 - 1)) about omega = 1
_H2 = math.pi**2 / 6 + 0.25
_H3 = math.pi**2 / 4 + 0.125

BETA_ENERGY_RANGE = (0.5, math.pi**2 / 8)


@dataclass
class AAQuantities:
    _: KW_ONLY
    xi: AveragedEnergy
    phi: float
    J: float
    omega: float
    a1: float
    dJ_dxi: float
    da1_dxi: float


@dataclass
class BasisSample:
    _: KW_ONLY
    tau: float
    tau_bar: float
    e_bar: float
    g: float
    g_prime: float
    beta: float
    g_prime_printed: float


@dataclass
class FourierComparison:
    _: KW_ONLY
    n: int
    beta: float
    quadrature: float
    printed: float

    @property
    def discrepancy(self) -> float:
        return abs(self.quadrature - self.printed)


def _energy(xi: FloatOrArray) -> np.ndarray:
    x = np.asarray(xi, dtype=float)
    bad = ~(x >= 0)  # NaN counts as bad
    if np.any(bad):
        raise NegativeEnergyError(float(np.atleast_1d(x)[np.atleast_1d(bad)][0]))
    return x


def _out(value: np.ndarray, like: FloatOrArray) -> FloatOrArray:
    if np.ndim(like) == 0:
        return float(value)
    return value


def _arc(ph: np.ndarray) -> np.ndarray:
    # arctan(1/phi), equal to pi/2 at phi = 0
    return np.arctan2(1.0, ph)


def phi(xi: FloatOrArray) -> FloatOrArray:
    x = _energy(xi)
    return _out(np.sqrt(2.0 * np.maximum(x, XI_WALL) - 1.0), xi)


def averaged_action(xi: FloatOrArray) -> FloatOrArray:
    """
    J(xi). Equals xi in the linear regime.
    """
    x = _energy(xi)
    ph = np.sqrt(2.0 * np.maximum(x, XI_WALL) - 1.0)
    hvi = (ph + 2.0 * x * _arc(ph)) / math.pi
    return _out(np.where(x <= XI_WALL, x, hvi), xi)


def frequency(xi: FloatOrArray) -> FloatOrArray:
    """
    omega(xi) = (dJ/dxi)^-1. Exactly 1 in the linear regime and strictly
    increasing above it.
    """
    x = _energy(xi)
    ph = np.sqrt(2.0 * np.maximum(x, XI_WALL) - 1.0)
    return _out(np.where(x <= XI_WALL, 1.0, (math.pi / 2) / _arc(ph)), xi)


def _h(omega: np.ndarray) -> np.ndarray:
    d = omega - 1.0
    with np.errstate(divide="ignore", invalid="ignore"):
        closed = (
            2.0 * omega**2 * np.sin(math.pi / omega) / (math.pi * (omega**2 - 1.0))
        )
    series = 1.0 + d / 2 - _H2 * d**2 + _H3 * d**3
    return np.where(np.abs(d) < OMEGA_SERIES_BAND, series, closed)


def _h_prime(omega: np.ndarray) -> np.ndarray:
    d = omega - 1.0
    w2 = omega**2 - 1.0
    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.sin(math.pi / omega)
        c = np.cos(math.pi / omega)
        closed = -(2.0 / math.pi) * (2.0 * omega * s + math.pi * c * w2) / w2**2
    series = 0.5 - 2.0 * _H2 * d + 3.0 * _H3 * d**2
    return np.where(np.abs(d) < OMEGA_SERIES_BAND, series, closed)


def a1(xi: FloatOrArray) -> FloatOrArray:
    """
    First Fourier coefficient of q(theta) at energy xi.

    sqrt(2 xi) in the linear regime. In the impact regime it is scaled by
    h(omega) = 2 omega^2 sin(pi/omega) / (pi (omega^2 - 1)), which tends to
    1 at the wall energy and to 4/pi / sqrt(2 xi) for large xi.
    """
    x = _energy(xi)
    amp = np.sqrt(2.0 * x)
    omega = np.asarray(frequency(x), dtype=float)
    return _out(np.where(x < XI_WALL, amp, amp * _h(omega)), xi)


def d_averaged_action(xi: FloatOrArray) -> FloatOrArray:
    x = _energy(xi)
    return _out(1.0 / np.asarray(frequency(x), dtype=float), xi)


def d_frequency(xi: FloatOrArray) -> FloatOrArray:
    """
    domega/dxi = omega^2 / (pi xi phi); zero in the linear regime, infinite at
    the wall energy from the right.
    """
    x = _energy(xi)
    ph = np.sqrt(2.0 * np.maximum(x, XI_WALL) - 1.0)
    omega = np.asarray(frequency(x), dtype=float)
    with np.errstate(divide="ignore"):
        hvi = omega**2 / (math.pi * x * ph)
    return _out(np.where(x <= XI_WALL, 0.0, hvi), xi)


def d2_averaged_action(xi: FloatOrArray) -> FloatOrArray:
    """
    d^2 J / dxi^2 = -1 / (pi xi phi) above the wall energy, zero below.
    """
    x = _energy(xi)
    ph = np.sqrt(2.0 * np.maximum(x, XI_WALL) - 1.0)
    with np.errstate(divide="ignore"):
        hvi = -1.0 / (math.pi * x * ph)
    return _out(np.where(x <= XI_WALL, 0.0, hvi), xi)


def d_a1(xi: FloatOrArray, side: Optional[Side] = None) -> FloatOrArray:
    """
    da1/dxi.

    a1 has a kink at xi = 1/2: the left derivative is 1, the right one is
    infinite. Evaluating exactly there requires `side`.
    """
    x = _energy(xi)
    at_kink = x == XI_WALL
    if side is None and np.any(at_kink):
        raise KinkError(XI_WALL, "a1")

    with np.errstate(divide="ignore", invalid="ignore"):
        linear = 1.0 / np.sqrt(2.0 * x)
        omega = np.asarray(frequency(x), dtype=float)
        amp = np.sqrt(2.0 * x)
        hvi = amp * _h(omega) / (2.0 * x) + amp * _h_prime(omega) * np.asarray(
            d_frequency(x), dtype=float
        )

    res = np.where(x < XI_WALL, linear, hvi)
    if np.any(at_kink):
        res = np.where(at_kink, 1.0 if side is Side.Left else np.inf, res)
    return _out(res, xi)


def d2_a1(xi: float, step: float = 1e-6) -> float:
    """
    Second derivative of a1 by central differences of the analytic first
    derivative. The stencil is kept on one side of the kink.
    """
    h = step * max(1.0, xi)
    lo, hi = xi - h, xi + h
    if lo < XI_WALL <= xi:
        lo, hi = xi, xi + 2 * h
    elif xi < XI_WALL <= hi:
        lo, hi = xi - 2 * h, xi
    return (float(d_a1(hi, Side.Left)) - float(d_a1(lo, Side.Right))) / (hi - lo)


def aa_quantities(xi: AveragedEnergy) -> AAQuantities:
    """
    All action-angle quantities at one energy level. At exactly xi = 1/2 the
    left derivative of a1 is reported.
    """
    return AAQuantities(
        xi=xi,
        phi=float(phi(xi)),
        J=float(averaged_action(xi)),
        omega=float(frequency(xi)),
        a1=float(a1(xi)),
        dJ_dxi=float(d_averaged_action(xi)),
        da1_dxi=float(d_a1(xi, Side.Left)),
    )


def q_of_theta(xi: FloatOrArray, theta: FloatOrArray) -> FloatOrArray:
    x = _energy(xi)
    omega = np.asarray(frequency(x), dtype=float)
    res = np.sqrt(2.0 * x) * np.sin(np.asarray(theta, dtype=float) / omega)
    return _out(res, theta if np.ndim(xi) == 0 else xi)


def potential(q: FloatOrArray, E: Optional[float] = None) -> FloatOrArray:
    """
    U(q) = q^2/2 between the walls, WALL outside.

    An orbit of energy 0 < E <= 1/2 never reaches the walls, so with such an
    `E` the quadratic branch applies for every q.
    """
    qa = np.asarray(q, dtype=float)
    quadratic = np.abs(qa) <= 1.0
    if E is not None and 0.0 < E <= XI_WALL:
        quadratic = np.ones_like(quadratic)
    return _out(np.where(quadratic, qa**2 / 2, WALL), q)


def beta_of_energy(E: float, xtol: float = 1e-12) -> float:
    """
    Basis parameter beta in [0, pi/2] with E = (beta / sin beta)^2 / 2.
    """
    lower, upper = BETA_ENERGY_RANGE
    if math.isclose(E, lower, rel_tol=0, abs_tol=1e-15):
        return 0.0
    if math.isclose(E, upper, rel_tol=0, abs_tol=1e-15):
        return math.pi / 2
    if not lower < E < upper:
        raise EnergyOutOfRangeError(E, lower, upper)

    def residual(beta: float) -> float:
        # np.sinc(x) = sin(pi x) / (pi x), finite at beta = 0
        return 0.5 / float(np.sinc(beta / math.pi)) ** 2 - E

    return float(optimize.brentq(residual, 0.0, math.pi / 2, xtol=xtol))


def _check_beta(beta: float) -> None:
    if not 0.0 <= beta <= math.pi / 2:
        raise ValueError(f"beta must lie in [0, pi/2], got {beta}")


def _g(tau: float, beta: float) -> float:
    tau_bar = (2 / math.pi) * math.asin(math.sin(tau))
    if beta == 0.0:
        return tau_bar
    return math.sin(beta * tau_bar) / math.sin(beta)


def basis_g(tau: float, beta: float) -> BasisSample:
    """
    Generalized basis function g and its derivative.

    `g_prime` is the exact derivative of g and carries the 2/pi factor of
    dtau_bar/dtau. `g_prime_printed` is the variant without it, kept for
    comparison.
    """
    _check_beta(beta)
    tau_bar = (2 / math.pi) * math.asin(math.sin(tau))
    e_bar = float(np.sign(math.cos(tau)))

    if beta == 0.0:
        g = tau_bar
        printed = e_bar
    else:
        g = math.sin(beta * tau_bar) / math.sin(beta)
        printed = beta * math.cos(beta * tau_bar) / math.sin(beta) * e_bar

    return BasisSample(
        tau=tau,
        tau_bar=tau_bar,
        e_bar=e_bar,
        g=g,
        g_prime=(2 / math.pi) * printed,
        beta=beta,
        g_prime_printed=printed,
    )


def fourier_bn(n: int, beta: float) -> float:
    """
    b_n of g(tau) = sum b_n sin(n tau), by quadrature over one period.
    """
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    _check_beta(beta)

    value, _ = integrate.quad(
        lambda t: _g(t, beta) * math.sin(n * t),
        -math.pi,
        math.pi,
        points=[-math.pi / 2, math.pi / 2],
        limit=200,
        epsabs=1e-13,
        epsrel=1e-12,
    )
    return value / math.pi


def fourier_bn_printed(n: int, beta: float) -> float:
    """
    The tabulated closed form 4 beta cot(pi / (2 beta)) sin(n pi/2) /
    (pi (beta^2 n^2 - 1)). NaN where it is singular.
    """
    with np.errstate(divide="ignore", invalid="ignore"):
        b = np.float64(beta)
        value = (
            4.0
            * b
            / (math.pi * (b**2 * n**2 - 1.0))
            / np.tan(math.pi / (2.0 * b))
            * math.sin(math.pi * n / 2)
        )
    return float(value) if np.isfinite(value) else math.nan


def fourier_bn_report(n: int, beta: float) -> FourierComparison:
    comparison = FourierComparison(
        n=n,
        beta=beta,
        quadrature=fourier_bn(n, beta),
        printed=fourier_bn_printed(n, beta),
    )
    logger.debug(
        "b_%d(beta=%.6g): quadrature %.12g, closed form %.12g",
        n,
        beta,
        comparison.quadrature,
        comparison.printed,
    )
    return comparison
