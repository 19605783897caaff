import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from purbound.bell import eof
from purbound.noise import fidelity_gate, fidelity_initial
from purbound.threshold import (
    ABOVE_APEX,
    BELOW_APEX,
    ancilla_limit,
    apex,
    apex_fidelity,
    apex_scan,
    loss_budget,
    loss_tradeoff,
    max_apex,
    max_fault_rate,
    parallel_map,
    region_boundary,
    region_boundary_above,
    repeater_check,
)

# [DERIVED] 40-digit mpmath root finding, independent of the package solvers
APEX_2 = (0.098376749813765148, 0.051226768495097625, 0.81292448527638985)
APEX_3 = (0.13963508192875704, 0.051810327962487869, 0.74022779224773662)
MAX_APEX = (2.4718659949836513, 0.12117399415106877, 0.052700756500571545, 0.77233514855638570)
LOSS = {0.0: 0.12008096993751687, 0.02: 0.077533834707656816, 0.04: 0.031388494011793228}


@pytest.mark.parametrize("n,expected", [(2, APEX_2), (3, APEX_3)])
def test_integer_apex_frozen(n, expected):
    a = apex(n)
    assert (a.p, a.q, a.f_star) == pytest.approx(expected, abs=1e-11)


def test_max_apex_frozen():
    best = max_apex()
    assert best.n == pytest.approx(MAX_APEX[0], abs=1e-4)  # flat maximum: n is ill-conditioned
    assert (best.p, best.q, best.f_star) == pytest.approx(MAX_APEX[1:], abs=1e-10)


@given(st.floats(1.05, 50.0))
@settings(max_examples=60, deadline=None)
def test_apex_residuals(n):
    a = apex(n)
    assert a.residual_max <= 1e-9
    assert abs(eof(a.f_star) - 1.0 / n) <= 1e-9
    assert abs(fidelity_initial(a.p) - a.f_star) <= 1e-9
    assert abs(fidelity_gate(a.q, n) - a.f_star) <= 1e-9


def test_max_apex_dominates_fine_grid():
    best = max_apex().q
    worst_gap = max(apex(1.1 + 0.001 * k).q - best for k in range(1, 8901))
    assert worst_gap <= 1e-12


def test_max_apex_between_two_and_three():
    assert 2.0 < max_apex().n < 3.0
    assert max_apex().q > max(apex(2).q, apex(3).q)


def test_apex_scan_ordered_and_thread_invariant():
    serial = apex_scan(1.5, 4.0, 0.25)
    threaded = apex_scan(1.5, 4.0, 0.25, threads=4)
    assert serial == threaded
    assert [a.n for a in serial] == pytest.approx(np.arange(1.5, 4.01, 0.25))


@pytest.mark.parametrize("lo,hi", [(3.0, 2.0), (1.0, 2.0), (0.5, 2.0)])
def test_apex_scan_rejects_empty_or_invalid_range(lo, hi):
    with pytest.raises(ValueError):
        apex_scan(lo, hi, 0.1)


def test_parallel_map_keeps_order():
    assert parallel_map(lambda x: x * x, range(20), threads=5) == [x * x for x in range(20)]


def test_ancilla_limit():
    assert ancilla_limit() == pytest.approx(1 - 1 / math.sqrt(2), abs=1e-15)
    assert fidelity_initial(ancilla_limit()) == pytest.approx(0.5, abs=1e-15)


@pytest.mark.parametrize("n", [2, 2.5, 3, 5])
def test_region_boundary_meets_apex(n):
    top = apex(n)
    curve = region_boundary(n, [0.0, top.p / 2, top.p])
    assert curve.branch == BELOW_APEX
    assert curve.points[0][1] == pytest.approx(0.0, abs=1e-12)
    assert abs(curve.points[-1][1] - top.q) <= 1e-9
    qs = [q for _, q in curve.points]
    assert qs == sorted(qs)


def test_region_boundary_rejects_p_beyond_apex():
    with pytest.raises(ValueError):
        region_boundary(3, [0.0, apex(3).p + 0.01])
    with pytest.raises(ValueError):
        region_boundary(3, [0.05, 0.01])


@pytest.mark.parametrize("n", [2, 3])
def test_region_boundary_above_shape(n):
    top = apex(n)
    limit = ancilla_limit()
    grid = list(np.linspace(top.p, limit, 12))
    curve = region_boundary_above(n, grid)
    assert curve.branch == ABOVE_APEX
    qs = [q for _, q in curve.points]
    assert abs(qs[0] - top.q) <= 1e-9  # continuous with the exact branch
    assert all(b <= a + 1e-12 for a, b in zip(qs, qs[1:]))
    assert qs[-1] == pytest.approx(0.0, abs=1e-9)


def test_region_boundary_above_rejects_unknown_model():
    with pytest.raises(ValueError):
        region_boundary_above(3, [0.2], model="exact")


def test_repeater_check_flips_at_apex():
    top = apex(3)
    assert repeater_check(top.q - 1e-4, 3).ok
    assert not repeater_check(top.q + 1e-4, 3).ok
    assert abs(repeater_check(top.q, 3).margin) <= 1e-9


def test_loss_tradeoff_frozen():
    pts = loss_tradeoff(list(LOSS))
    for pt in pts:
        assert pt.q_l_max == pytest.approx(LOSS[pt.q_f], abs=1e-10)


def test_loss_tradeoff_strictly_decreasing_to_lossless_bound():
    q_star = max_apex().q
    grid = list(np.linspace(0.0, q_star, 21))
    pts = loss_tradeoff(grid)
    values = [pt.q_l_max for pt in pts]
    assert all(b < a for a, b in zip(values, values[1:]))
    assert values[-1] <= 1e-4
    assert max_fault_rate(0.0)[0] == pytest.approx(q_star, abs=1e-4)


def test_loss_infeasible_beyond_bound():
    pt = loss_tradeoff([0.06])[0]
    assert pt.q_l_max == 0.0 and math.isnan(pt.n_star)
    assert loss_budget(0.06, 3) == -1.0


def test_apex_fidelity_is_eof_inverse():
    for n in (1.5, 2, 7):
        assert eof(apex_fidelity(n)) == pytest.approx(1 / n, abs=1e-11)
