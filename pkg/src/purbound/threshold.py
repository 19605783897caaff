"""n-apex solutions, the maximal tolerable gate error, and region/loss curves."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Sequence

from .bell import eof, eof_inverse
from .noise import (
    LossParams,
    fidelity_gate,
    fidelity_initial,
    final_gate_distribution,
    loss_fidelity_gate,
)
from .solvers import (
    DEFAULT_TOL,
    BracketError,
    SolverError,
    bisect,
    golden_max,
    grid_then_golden,
    is_unimodal,
)

N_MAX = 50.0
COARSE_STEP = 0.05
RESIDUAL_TOL = 1e-9
BELOW_APEX = "below-apex"
ABOVE_APEX = "above-apex-model"
MODELS = ("adversarial-concentration",)


def parallel_map(fn: Callable, items: Iterable, threads: int = 1) -> list:
    """``map`` that keeps input order; runs on a thread pool when ``threads > 1``."""
    items = list(items)
    if threads <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


@lru_cache(maxsize=65536)
def apex_fidelity(n: float, tol: float = DEFAULT_TOL) -> float:
    """Fidelity whose entanglement of formation is exactly 1/n."""
    return eof_inverse(1.0 / n, tol=tol)


@dataclass(frozen=True)
class ApexPoint:
    n: float
    p: float
    q: float
    f_star: float

    def residuals(self) -> tuple[float, float, float]:
        """Forward residuals of the three defining equations."""
        return (
            abs(eof(self.f_star) - 1.0 / self.n),
            abs(fidelity_initial(self.p) - self.f_star),
            abs(fidelity_gate(self.q, self.n) - self.f_star),
        )

    @property
    def residual_max(self) -> float:
        return max(self.residuals())


@dataclass(frozen=True)
class BoundaryCurve:
    n: float
    points: tuple[tuple[float, float], ...]
    branch: str


def apex(n: float, tol: float = DEFAULT_TOL) -> ApexPoint:
    """Solve S(F_p) = 1/n together with F_q = F_p for (p, q)."""
    n = float(n)
    if not n >= 1.0:
        raise ValueError(f"n must be >= 1, got {n!r}")
    if n == 1.0:
        return ApexPoint(1.0, 0.0, 0.0, 1.0)
    f = apex_fidelity(n, tol)
    p = 1.0 - math.sqrt(f)
    try:
        q = bisect(lambda x: fidelity_gate(x, n) - f, 0.0, 0.5, tol=tol)
    except BracketError as exc:
        raise SolverError(f"apex q not bracketed for n={n}") from exc
    return ApexPoint(n, p, q, f)


def _grid(lo: float, hi: float, step: float) -> list[float]:
    if step <= 0:
        raise ValueError("step must be positive")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return [round(lo + k * step, 12) for k in range(count)]


def apex_scan(
    n_min: float, n_max: float, step: float, tol: float = DEFAULT_TOL, threads: int = 1
) -> list[ApexPoint]:
    if not (1.0 < n_min <= n_max):
        raise ValueError(f"need 1 < n_min <= n_max, got [{n_min}, {n_max}]")
    return parallel_map(lambda n: apex(n, tol), _grid(n_min, n_max, step), threads)


def _eof_slope(f: float) -> float:
    r = math.sqrt(f * (1.0 - f))
    x = 0.5 + r
    return math.log2((1.0 - x) / x) * (1.0 - 2.0 * f) / (2.0 * r)


def apex_stationarity(n: float, tol: float = DEFAULT_TOL) -> float:
    """Quantity whose sign is opposite to dq/dn along the apex curve.

    Differentiating F_q(q(n), n) = f*(n) gives dq/dn = g / dF_q/dq with
    g = df*/dn - dF_q/dn. Since dF_q/dq < 0, a maximum of q is a root of g where
    g crosses from negative to positive. Unlike q itself, g has a simple root
    there, so the maximiser n* is well conditioned.
    """
    a = apex(n, tol)
    df_star = -1.0 / (n * n * _eof_slope(a.f_star))
    dfq_dn = (1.0 - 2.0 * a.q) ** (2.0 * n - 1.0) * math.log1p(-2.0 * a.q)
    return df_star - dfq_dn


def max_apex(tol: float = 1e-10, n_max: float = N_MAX) -> ApexPoint:
    """The apex with the largest gate error q over real n in (1, n_max]."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    inner = min(DEFAULT_TOL, tol)
    grid = _grid(1.0 + COARSE_STEP, n_max, COARSE_STEP)
    qs = [apex(n, inner).q for n in grid]
    if not is_unimodal(qs, slack=1e-13):
        grid = _grid(1.0 + COARSE_STEP / 50, n_max, COARSE_STEP / 50)
        qs = [apex(n, inner).q for n in grid]
    k = max(range(len(qs)), key=qs.__getitem__)
    lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, len(grid) - 1)]
    g = lambda n: apex_stationarity(n, inner)
    if g(lo) < 0.0 < g(hi):
        n_star = bisect(g, lo, hi, tol=tol)
    else:
        n_star, _ = golden_max(lambda n: apex(n, inner).q, lo, hi, tol=tol)
    best = apex(n_star, inner)
    if best.q < qs[k]:
        best = apex(grid[k], inner)
    return best


def _strictly_increasing(xs: Sequence[float]) -> bool:
    return all(b > a for a, b in zip(xs, xs[1:]))


def region_boundary(n: float, p_grid: Sequence[float], tol: float = DEFAULT_TOL) -> BoundaryCurve:
    """Boundary F_q = F_p between p = 0 and the n-apex."""
    top = apex(n, tol)
    p_grid = [float(p) for p in p_grid]
    if not _strictly_increasing(p_grid):
        raise ValueError("p grid must be strictly increasing")
    for p in p_grid:
        if p < 0 or p > top.p + 1e-12:
            raise ValueError(f"p={p} lies outside [0, apex p={top.p:.6g}] for n={n}")
    points = []
    for p in p_grid:
        target = fidelity_initial(min(p, top.p))
        q = bisect(lambda x: fidelity_gate(x, n) - target, 0.0, 0.5, tol=tol)
        points.append((p, q))
    return BoundaryCurve(float(n), tuple(points), BELOW_APEX)


def ancilla_limit() -> float:
    """Largest p for which (1-p)^2 is still above the separable fidelity 1/2."""
    return 1.0 - 1.0 / math.sqrt(2.0)


def concentrated_final_fidelity(f1: float, q: float, n: float) -> float:
    """Fidelity after the final-gate channel acts on a pair with fidelity f1 whose
    remaining weight sits on the single Bell state the channel returns least often
    to the singlet."""
    dist = final_gate_distribution(q, n)
    return f1 * dist[0] + (1.0 - f1) * min(dist[1:])


def region_boundary_above(
    n: float,
    p_grid: Sequence[float],
    model: str = "adversarial-concentration",
    tol: float = DEFAULT_TOL,
) -> BoundaryCurve:
    """Boundary F' = F_p beyond the n-apex under an explicit model for F'.

    Model ``adversarial-concentration``: the combined pair has fidelity F1 with
    S(F1) = min(1, n S(F_p)) and its remaining weight on one wrong Bell state,
    chosen adversarially; the final-gate channel then gives F'.
    """
    if model not in MODELS:
        raise ValueError(f"unknown model {model!r}; expected one of {MODELS}")
    top = apex(n, tol)
    limit = ancilla_limit()
    p_grid = [float(p) for p in p_grid]
    if not _strictly_increasing(p_grid):
        raise ValueError("p grid must be strictly increasing")
    for p in p_grid:
        if p < top.p - 1e-12 or p > limit + 1e-12:
            raise ValueError(
                f"p={p} lies outside [apex p={top.p:.6g}, {limit:.6g}] for n={n}"
            )
    points = []
    for p in p_grid:
        fp = fidelity_initial(min(max(p, top.p), limit))
        f1 = eof_inverse(min(1.0, n * eof(fp)), tol=tol)

        def gap(q: float) -> float:
            return concentrated_final_fidelity(f1, q, n) - fp

        if gap(0.0) <= 1e-15:
            q = 0.0
        else:
            q = bisect(gap, 0.0, 0.5, tol=tol)
        points.append((p, q))
    return BoundaryCurve(float(n), tuple(points), ABOVE_APEX)


@dataclass(frozen=True)
class RepeaterCheck:
    ok: bool
    margin: float


def repeater_check(q: float, n: float) -> RepeaterCheck:
    """Whether the gate-limited fidelity still carries at least 1/n ebits."""
    if not n > 1:
        raise ValueError(f"n must exceed 1, got {n!r}")
    margin = eof(fidelity_gate(q, n)) - 1.0 / n
    return RepeaterCheck(margin >= 0.0, margin)


@dataclass(frozen=True)
class LossPoint:
    q_f: float
    q_l_max: float
    n_star: float


def _loss_gap(q_l: float, q_f: float, n: float) -> float:
    return loss_fidelity_gate(LossParams(q_l=q_l, q_f=q_f), n) - apex_fidelity(n)


def loss_budget(q_f: float, n: float, tol: float = DEFAULT_TOL) -> float:
    """Largest loss rate q_l that keeps n-copy combination viable at fault rate q_f.

    Returns -1 when even q_l = 0 is not viable. The gap is decreasing in q_l.
    """
    if _loss_gap(0.0, q_f, n) < 0.0:
        return -1.0
    if _loss_gap(1.0, q_f, n) >= 0.0:
        return 1.0
    return bisect(lambda ql: _loss_gap(ql, q_f, n), 0.0, 1.0, tol=tol)


def _max_over_n(f: Callable[[float], float], n_max: float, tol: float) -> tuple[float, float]:
    n_star, best = grid_then_golden(f, _grid(1.0 + COARSE_STEP, n_max, COARSE_STEP), tol=tol)
    if best < 0.0:
        return math.nan, best
    return n_star, best


def loss_tradeoff(
    q_f_grid: Sequence[float],
    n_max: float = N_MAX,
    tol: float = DEFAULT_TOL,
    threads: int = 1,
) -> list[LossPoint]:
    """For each fault rate, the largest loss rate for which some n in (1, n_max] is viable.

    Fault and loss components are identified between preparation and gates
    (p_fault = q_f, p_loss = q_l). Infeasible fault rates report q_l_max = 0 and
    n_star = nan.
    """

    def one(q_f: float) -> LossPoint:
        if not (0.0 <= q_f <= 0.5):
            raise ValueError(f"q_f must lie in [0, 1/2], got {q_f!r}")
        n_star, ql = _max_over_n(lambda n: loss_budget(q_f, n, tol), n_max, 1e-9)
        if math.isnan(n_star):
            return LossPoint(float(q_f), 0.0, math.nan)
        return LossPoint(float(q_f), max(ql, 0.0), n_star)

    return parallel_map(one, [float(x) for x in q_f_grid], threads)


def max_fault_rate(q_l: float, n_max: float = N_MAX, tol: float = DEFAULT_TOL) -> tuple[float, float]:
    """Largest fault rate q_f viable at loss rate q_l; returns ``(q_f, n_star)``."""

    def budget(n: float) -> float:
        if _loss_gap(q_l, 0.0, n) < 0.0:
            return -1.0
        return bisect(lambda qf: _loss_gap(q_l, qf, n), 0.0, 0.5, tol=tol)

    n_star, qf = _max_over_n(budget, n_max, 1e-9)
    return max(qf, 0.0), n_star
