"""
Independent oracles for the analytic quantities.
"""
import math

from scipy import integrate

import hvi.domain as d


def quad_averaged_action(xi: float) -> float:
    """
    J = (1/2pi) of the closed phase curve integral of p dq, by quadrature.
    """
    q_max = min(math.sqrt(2 * xi), 1.0)
    value, _ = integrate.quad(
        lambda q: math.sqrt(max(2 * xi - q * q, 0.0)),
        -q_max,
        q_max,
        epsabs=1e-14,
        epsrel=1e-12,
        limit=200,
    )
    return value / math.pi


def quad_a1(xi: float) -> float:
    """
    First sine coefficient of sqrt(2 xi) sin(theta / omega) over [-pi, pi].
    """
    omega = d.frequency(xi)
    value, _ = integrate.quad(
        lambda t: math.sqrt(2 * xi) * math.sin(t / omega) * math.sin(t),
        -math.pi,
        math.pi,
        epsabs=1e-14,
        epsrel=1e-12,
        limit=200,
    )
    return value / math.pi


def central_difference(func, x: float, h: float = 1e-6) -> float:
    return (func(x + h) - func(x - h)) / (2 * h)


def wrapped(nu: float) -> float:
    """
    Phase folded to (-pi, pi].
    """
    return math.remainder(nu, 2 * math.pi)
