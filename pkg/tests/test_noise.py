import numpy as np
import pytest
from hypothesis import given, strategies as st

from purbound.noise import (
    LossParams,
    NoiseParams,
    final_gate_distribution,
    fidelity_gate,
    fidelity_gate_oracle,
    fidelity_gate_sum,
    fidelity_initial,
    loss_fidelity_gate,
    loss_fidelity_initial,
    pauli_pair_survey,
)

Q_GRID = [round(0.01 * k, 2) for k in range(51)]

# [DERIVED] exact enumeration in 40-digit arithmetic, q = 0.1, n = 2
SURVEY_Q01_N2 = {
    ("X", "X"): 0.6724, ("X", "Y"): 0.6804, ("X", "Z"): 0.666,
    ("Y", "X"): 0.6804, ("Y", "Y"): 0.7048, ("Y", "Z"): 0.6804,
    ("Z", "X"): 0.666, ("Z", "Y"): 0.6804, ("Z", "Z"): 0.6724,
}


def test_initial_fidelity():
    assert fidelity_initial(0.0) == 1.0
    assert fidelity_initial(0.1) == pytest.approx(0.81, abs=1e-15)


def test_gate_fidelity_limits():
    assert fidelity_gate(0.0, 3) == 1.0
    assert fidelity_gate(0.5, 3) == pytest.approx(0.25)
    assert fidelity_gate(0.1, 1) == pytest.approx(0.9**2, abs=1e-15)


@pytest.mark.parametrize("n", range(1, 11))
def test_closed_form_equals_binomial_sum(n):
    err = max(abs(fidelity_gate(q, n) - fidelity_gate_sum(q, n)) for q in Q_GRID)
    assert err <= 1e-12


@pytest.mark.parametrize("n", range(2, 7))
def test_closed_form_equals_enumeration(n):
    err = max(abs(fidelity_gate(q, n) - fidelity_gate_oracle(q, n, "X", "Z")) for q in Q_GRID)
    assert err <= 1e-12


@given(st.floats(1.0, 20.0), st.floats(0.0, 0.499))
def test_monotone_decreasing_in_q(n, q):
    assert fidelity_gate(q + 1e-3, n) < fidelity_gate(q, n)


@given(st.floats(1.0, 20.0), st.floats(0.001, 0.499))
def test_monotone_decreasing_in_n(n, q):
    # the odd-power term decays geometrically, so far out it stops registering
    assert fidelity_gate(q, n + 0.5) <= fidelity_gate(q, n)


@given(st.floats(1.0, 10.0), st.floats(0.001, 0.2))
def test_strictly_decreasing_in_n_for_small_q(n, q):
    assert fidelity_gate(q, n + 0.5) < fidelity_gate(q, n)


def test_survey_frozen_values():
    survey = pauli_pair_survey(0.1, 2)
    for pair, value in SURVEY_Q01_N2.items():
        assert survey.fidelities[pair] == pytest.approx(value, abs=1e-14)


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("q", [0.05, 0.1])
def test_survey_minimum_is_closed_form(q, n):
    survey = pauli_pair_survey(q, n)
    assert survey.minimum == pytest.approx(fidelity_gate(q, n), abs=1e-12)
    assert set(survey.pairs_at(survey.minimum)) == {("X", "Z"), ("Z", "X")}


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("q", [0.05, 0.1])
def test_survey_has_at_most_three_distinct_values(q, n):
    # Exact enumeration gives four classes: {YY}, {XX, ZZ}, {XY, YX, YZ, ZY}, {XZ, ZX}.
    assert len(pauli_pair_survey(q, n).distinct) <= 3


@given(st.floats(0.0, 0.5), st.floats(1.0, 30.0))
def test_loss_gate_without_loss_is_gate_fidelity(q, n):
    assert abs(loss_fidelity_gate(LossParams(q_l=0.0, q_f=q), n) - fidelity_gate(q, n)) <= 1e-14


def test_loss_initial_without_loss():
    assert loss_fidelity_initial(LossParams(p_fault=0.1)) == pytest.approx(fidelity_initial(0.1))
    assert loss_fidelity_initial(LossParams(p_loss=1.0)) == 0.25


@given(st.floats(0.0, 0.5), st.floats(1.0, 20.0))
def test_final_gate_distribution(q, n):
    dist = final_gate_distribution(q, n)
    assert sum(dist) == pytest.approx(1.0, abs=1e-14)
    assert dist[0] == pytest.approx(fidelity_gate(q, n), abs=1e-14)
    assert min(dist) >= 0.0


def test_validation():
    with pytest.raises(ValueError):
        fidelity_gate(0.6, 2)
    with pytest.raises(ValueError):
        fidelity_gate(0.1, 0.5)
    with pytest.raises(ValueError):
        fidelity_gate_sum(0.1, 2.5)
    with pytest.raises(ValueError):
        NoiseParams(p=-0.1, q=0.0)


def test_oracle_accepts_full_q_range():
    assert 0.0 <= fidelity_gate_oracle(0.9, 3) <= 1.0
