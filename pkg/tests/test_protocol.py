import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from purbound.bell import BellDiagonal
from purbound.protocol import (
    DOWN,
    STATIONARY,
    UP,
    GateNoiseSpec,
    NoTransitionError,
    bbpssw_recurrence,
    dejmps_recurrence,
    protocol_threshold,
    purification_round,
    recurse_to_fixed_point,
)
from purbound.threshold import max_apex

from .strategies import bell_weights

NOISELESS = GateNoiseSpec()


def test_noiseless_bbpssw_werner_frozen():
    # [DERIVED] standard recurrence F' = (F^2 + r^2) / (F^2 + 2Fr + 5r^2), r = (1-F)/3
    f, r = 0.75, 0.25 / 3
    n = f * f + 2 * f * r + 5 * r * r
    success, out = purification_round(BellDiagonal.werner(f), BellDiagonal.werner(f), NOISELESS)
    assert success == pytest.approx(n, abs=1e-12)
    assert out.fidelity() == pytest.approx((f * f + r * r) / n, abs=1e-12)


@pytest.mark.parametrize("protocol", ["bbpssw", "dejmps"])
def test_singlets_are_fixed(protocol):
    success, out = purification_round(BellDiagonal.singlet(), BellDiagonal.singlet(), NOISELESS, protocol)
    assert success == pytest.approx(1.0) and out.fidelity() == pytest.approx(1.0)


@pytest.mark.parametrize("protocol", ["bbpssw", "dejmps"])
@pytest.mark.parametrize("f", [0.6, 0.75, 0.9])
def test_noiseless_gain(protocol, f):
    _, out = purification_round(BellDiagonal.werner(f), BellDiagonal.werner(f), NOISELESS, protocol)
    assert out.fidelity() > f


@given(bell_weights(), bell_weights())
@settings(deadline=None, max_examples=60)
def test_recurrences_match_matrix_path(wa, wb):
    a, b = BellDiagonal.from_weights(wa), BellDiagonal.from_weights(wb)
    for protocol, closed in (("bbpssw", bbpssw_recurrence), ("dejmps", dejmps_recurrence)):
        s1, o1 = purification_round(a, b, NOISELESS, protocol)
        s2, o2 = closed(a, b)
        assert abs(s1 - s2) <= 1e-10
        np.testing.assert_allclose(o1.weights, o2.weights, atol=1e-10)


@given(bell_weights(), st.sampled_from(["depolarizing", "adversarial-xz"]), st.floats(0.0, 0.5),
       st.sampled_from(["bbpssw", "dejmps"]))
@settings(deadline=None, max_examples=60)
def test_noisy_round_output_is_valid(w, model, q, protocol):
    state = BellDiagonal.from_weights(w)
    success, out = purification_round(state, state, GateNoiseSpec(model, q), protocol)
    assert 0.0 < success <= 1.0 + 1e-12
    assert np.all(out.weights >= 0.0) and out.weights.sum() == pytest.approx(1.0, abs=1e-12)


def test_recursion_verdicts():
    assert recurse_to_fixed_point(0.75, NOISELESS).verdict == UP
    assert recurse_to_fixed_point(0.5, NOISELESS).verdict == STATIONARY
    assert recurse_to_fixed_point(0.9, GateNoiseSpec("depolarizing", 0.2), "dejmps").verdict == DOWN


def test_noiseless_recursion_reaches_singlet():
    trace = recurse_to_fixed_point(0.75, NOISELESS, "dejmps")
    assert trace.final_fidelity > 1 - 1e-8


def test_thresholds_ordered_and_bounded():
    q_dep = protocol_threshold("depolarizing", "dejmps", 0.85)
    q_adv = protocol_threshold("adversarial-xz", "dejmps", 0.85)
    assert 0.02 <= q_dep <= 0.06
    assert q_adv <= max_apex().q + 5e-4
    assert protocol_threshold("adversarial-xz", "bbpssw", 0.85) <= max_apex().q + 5e-4


def test_no_transition_without_noise():
    with pytest.raises(NoTransitionError):
        protocol_threshold("none", "dejmps", 0.85)


def test_validation():
    with pytest.raises(ValueError):
        GateNoiseSpec("thermal", 0.1)
    with pytest.raises(ValueError):
        GateNoiseSpec("depolarizing", 1.5)
    with pytest.raises(ValueError):
        purification_round(BellDiagonal.singlet(), BellDiagonal.singlet(), NOISELESS, "hashing")
    with pytest.raises(ValueError):
        recurse_to_fixed_point(0.8, NOISELESS, max_rounds=0)
