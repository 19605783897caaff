"""Scalar root finding and 1-D maximisation used by the threshold engine."""

from __future__ import annotations

import math
from typing import Callable

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 200


class SolverError(RuntimeError):
    """A numerical routine could not produce a trustworthy answer."""


class BracketError(SolverError):
    pass


def bisect(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> float:
    """Root of ``f`` in ``[lo, hi]`` by bisection.

    ``f(lo)`` and ``f(hi)`` must not have the same strict sign. An exact zero at
    either endpoint is returned immediately.
    """
    flo = f(lo)
    if flo == 0.0:
        return lo
    fhi = f(hi)
    if fhi == 0.0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise BracketError(
            f"root not bracketed on [{lo!r}, {hi!r}]: f(lo)={flo!r}, f(hi)={fhi!r}"
        )
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= tol or mid == lo or mid == hi:
            return mid
        fmid = f(mid)
        if fmid == 0.0:
            return mid
        if (fmid > 0) == (flo > 0):
            lo, flo = mid, fmid
        else:
            hi = mid
    raise SolverError(f"bisection did not reach tol={tol} in {max_iter} iterations")


def golden_max(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-10,
    max_iter: int = DEFAULT_MAX_ITER,
) -> tuple[float, float]:
    """Maximise a unimodal ``f`` on ``[lo, hi]``; returns ``(x, f(x))``."""
    x1 = hi - INV_PHI * (hi - lo)
    x2 = lo + INV_PHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        if f1 >= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - INV_PHI * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + INV_PHI * (hi - lo)
            f2 = f(x2)
    else:
        raise SolverError(f"golden-section search did not reach tol={tol}")
    x = 0.5 * (lo + hi)
    return x, f(x)


def grid_then_golden(
    f: Callable[[float], float],
    grid: list[float],
    tol: float = 1e-10,
) -> tuple[float, float]:
    """Coarse grid scan followed by golden-section refinement around the best cell.

    If the sampled values are not unimodal the best grid point's neighbourhood is
    still refined, but a sample-based check guards the refined value: the larger
    of the refined and best sampled values is returned.
    """
    values = [f(x) for x in grid]
    k = max(range(len(values)), key=values.__getitem__)
    lo = grid[max(k - 1, 0)]
    hi = grid[min(k + 1, len(grid) - 1)]
    if lo == hi:
        return grid[k], values[k]
    x, fx = golden_max(f, lo, hi, tol=tol)
    if fx < values[k]:
        return grid[k], values[k]
    return x, fx


def is_unimodal(values: list[float], slack: float = 0.0) -> bool:
    """True when the sequence rises (weakly) then falls (weakly)."""
    k = max(range(len(values)), key=values.__getitem__)
    up = all(values[i + 1] >= values[i] - slack for i in range(k))
    down = all(values[i + 1] <= values[i] + slack for i in range(k, len(values) - 1))
    return up and down
