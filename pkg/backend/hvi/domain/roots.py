"""
Bracketed root finding on scanned grids.

Scalar functions of the averaged energy have a square-root kink at the wall
energy, so roots are located by sign changes on a grid that is geometrically
refined towards the left end of the search window and then polished with
Brent's method.
"""
from typing import Callable, Iterator

import numpy as np
from scipy import optimize

from .base import BracketError

VectorFunc = Callable[[np.ndarray], np.ndarray]
ScalarFunc = Callable[[float], float]


def scan_grid(
    lower: float,
    upper: float,
    step: float,
    *,
    refine_to: float = 1e-9,
    refine_points: int = 60,
) -> np.ndarray:
    """
    Grid on [lower + refine_to, upper] which is geometric close to `lower`
    and uniform with spacing `step` beyond lower + step.
    """
    near = lower + np.geomspace(refine_to, step, refine_points)
    far = np.arange(lower + step, upper, step)
    return np.unique(np.concatenate([near, far, [upper]]))


def sign_changes(values: np.ndarray) -> np.ndarray:
    """
    Indices i with a sign change between values[i] and values[i + 1]. A value
    that is exactly zero counts as a change on its left.
    """
    s = np.sign(values)
    return np.flatnonzero((s[:-1] * s[1:] < 0) | ((s[1:] == 0) & (s[:-1] != 0)))


def refine(func: ScalarFunc, a: float, b: float, xtol: float = 1e-12) -> float:
    fa = func(a)
    if fa == 0.0:
        return a
    fb = func(b)
    if fb == 0.0:
        return b
    return float(optimize.brentq(func, a, b, xtol=xtol, rtol=4 * np.finfo(float).eps))


def bisect_many(
    func: Callable[[np.ndarray, np.ndarray], np.ndarray],
    a: np.ndarray,
    b: np.ndarray,
    *,
    iterations: int = 60,
) -> tuple[np.ndarray, np.ndarray]:
    """
    Bisects many independent brackets at once.

    `func(idx, x)` evaluates bracket `idx` at `x`. Every bracket must hold a
    sign change. Returns the midpoints and the final bracket widths.
    """
    a = np.array(a, dtype=float)
    b = np.array(b, dtype=float)
    idx = np.arange(a.size)
    fa = func(idx, a)
    for _ in range(iterations):
        m = 0.5 * (a + b)
        fm = func(idx, m)
        left = np.sign(fm) == np.sign(fa)
        a = np.where(left, m, a)
        fa = np.where(left, fm, fa)
        b = np.where(left, b, m)
    return 0.5 * (a + b), b - a


def brackets(func: VectorFunc, grid: np.ndarray) -> Iterator[tuple[float, float]]:
    values = func(grid)
    for i in sign_changes(values):
        if np.isfinite(values[i]) and np.isfinite(values[i + 1]):
            yield float(grid[i]), float(grid[i + 1])


def all_roots(
    func: VectorFunc, grid: np.ndarray, xtol: float = 1e-12
) -> list[float]:
    def scalar(x: float) -> float:
        return float(func(np.asarray(x)))

    return [refine(scalar, a, b, xtol) for a, b in brackets(func, grid)]


def first_root(
    func: VectorFunc,
    grid: np.ndarray,
    what: str,
    xtol: float = 1e-12,
) -> float:
    """
    Smallest root of `func` on `grid`, raises BracketError if there is none.
    """

    def scalar(x: float) -> float:
        return float(func(np.asarray(x)))

    for a, b in brackets(func, grid):
        return refine(scalar, a, b, xtol)

    raise BracketError(what, float(grid[0]), float(grid[-1]))
