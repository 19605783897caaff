"""Fidelity formulas for preparation noise, gate noise and qubit loss."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .bell import PAULI_INDEX

ORACLE_MIN_N = 2
ORACLE_MAX_N = 8
PAULIS = ("X", "Y", "Z")
# Pauli class carried to the surviving pair by each propagated fault; two cancel.
PROPAGATED = "Y"


def _prob(x: float, name: str) -> float:
    x = float(x)
    if not (0.0 <= x <= 1.0):
        raise ValueError(f"{name} must lie in [0, 1], got {x!r}")
    return x


@dataclass(frozen=True)
class NoiseParams:
    p: float
    q: float

    def __post_init__(self):
        _prob(self.p, "p")
        _prob(self.q, "q")


@dataclass(frozen=True)
class LossParams:
    p_loss: float = 0.0
    p_fault: float = 0.0
    q_l: float = 0.0
    q_f: float = 0.0

    def __post_init__(self):
        for name in ("p_loss", "p_fault", "q_l", "q_f"):
            _prob(getattr(self, name), name)


def fidelity_initial(p: float) -> float:
    """Singlet fidelity after independent X and Z faults of probability p: (1-p)^2."""
    p = _prob(p, "p")
    return (1.0 - p) ** 2


def fidelity_gate(q: float, n: float) -> float:
    """Worst-case fidelity left by the final faulty gates when combining n copies.

    Closed form 1/2 (1 - 2q + 2q^2 + (1-2q)^(2n-1)); n may be real.
    """
    q = _prob(q, "q")
    if q > 0.5:
        raise ValueError(f"q must lie in [0, 1/2] for the closed form, got {q!r}")
    n = float(n)
    if not n >= 1.0:
        raise ValueError(f"n must be >= 1, got {n!r}")
    return 0.5 * (1.0 - 2.0 * q + 2.0 * q * q + (1.0 - 2.0 * q) ** (2.0 * n - 1.0))


def _check_integer_n(n, low: int = 1, high: int | None = None) -> int:
    if isinstance(n, bool) or int(n) != n:
        raise ValueError(f"n must be an integer, got {n!r}")
    n = int(n)
    if n < low or (high is not None and n > high):
        raise ValueError(f"n must lie in [{low}, {high}], got {n}")
    return n


def fidelity_gate_sum(q: float, n: int) -> float:
    """The gate-noise fidelity as two explicit binomial sums over propagated faults."""
    q = _prob(q, "q")
    n = _check_integer_n(n)
    even = sum(
        math.comb(2 * n - 2, 2 * m) * q ** (2 * m) * (1 - q) ** (2 * n - 2 * m - 2)
        for m in range(n)
    )
    odd = sum(
        math.comb(2 * n - 2, 2 * m + 1) * q ** (2 * m + 1) * (1 - q) ** (2 * n - 2 * m - 3)
        for m in range(n - 1)
    )
    return (1 - q) ** 2 * even + q**2 * odd


def fidelity_gate_oracle(q: float, n: int, direct_left: str = "X", direct_right: str = "Z") -> float:
    """Enumerate every fault pattern and sum the probability that the singlet survives.

    Each of the 2n-2 measured-out qubits faults with probability q and, if it does,
    hands one ``PROPAGATED`` Pauli to the surviving pair. The surviving pair's own
    qubits fault with probability q each, with Paulis ``direct_left`` and
    ``direct_right``. A Pauli on either half of the singlet has the same effect, so
    the net operator is the XOR of Bell-index shifts.
    """
    q = _prob(q, "q")
    n = _check_integer_n(n, ORACLE_MIN_N, ORACLE_MAX_N)
    for s in (direct_left, direct_right):
        if s not in PAULIS:
            raise ValueError(f"direct error must be one of X, Y, Z, got {s!r}")
    prop = PAULI_INDEX[PROPAGATED]
    direct = (PAULI_INDEX[direct_left], PAULI_INDEX[direct_right])
    survivors = []
    for pattern in itertools.product((0, 1), repeat=2 * n - 2 + 2):
        prob = 1.0
        shift = 0
        for k, hit in enumerate(pattern):
            prob *= q if hit else 1.0 - q
            if hit:
                shift ^= prop if k >= 2 else direct[k]
        if shift == 0:
            survivors.append(prob)
    return math.fsum(survivors)


@dataclass(frozen=True)
class PairSurvey:
    q: float
    n: int
    fidelities: dict[tuple[str, str], float]
    distinct: tuple[float, ...]

    @property
    def minimum(self) -> float:
        return self.distinct[0]

    def pairs_at(self, value: float, tol: float = 1e-12) -> list[tuple[str, str]]:
        return [k for k, v in self.fidelities.items() if abs(v - value) <= tol]


def pauli_pair_survey(q: float, n: int, tol: float = 1e-12) -> PairSurvey:
    """Oracle fidelity for all 9 direct Pauli pairs, grouped into distinct values.

    For q <= 1/2 the smallest value must coincide with :func:`fidelity_gate`;
    a mismatch raises ``ArithmeticError``.
    """
    fids = {(a, b): fidelity_gate_oracle(q, n, a, b) for a in PAULIS for b in PAULIS}
    survey = PairSurvey(float(q), int(n), fids, tuple(distinct_values(fids.values(), tol)))
    if q <= 0.5:
        expected = fidelity_gate(q, n)
        if abs(survey.minimum - expected) > tol:
            raise ArithmeticError(
                f"survey minimum {survey.minimum!r} differs from closed form {expected!r}"
            )
    return survey


def distinct_values(values, tol: float = 1e-12) -> list[float]:
    """Sorted values with near-duplicates (within ``tol``) merged."""
    out: list[float] = []
    for v in sorted(values):
        if not out or v - out[-1] > tol:
            out.append(v)
    return out


def loss_fidelity_initial(lp: LossParams) -> float:
    return (1.0 - lp.p_loss) * (1.0 - lp.p_fault) ** 2 + lp.p_loss / 4.0


def loss_fidelity_gate(lp: LossParams, n: float) -> float:
    """Gate-noise fidelity with loss, implemented term for term as published.

    Note the loss factor (1-q_l) enters the last term only once, not squared;
    this is kept as is.
    """
    n = float(n)
    if not n >= 1.0:
        raise ValueError(f"n must be >= 1, got {n!r}")
    ql, qf = lp.q_l, lp.q_f
    k = 2.0 * n - 1.0
    return (
        ql / 4.0
        + 0.5 * (1.0 - 2.0 * qf) ** k * (1.0 - ql) ** k
        + 0.5 * (1.0 - ql) * (1.0 - 2.0 * qf + 2.0 * qf * qf)
    )


def final_gate_distribution(q: float, n: float) -> tuple[float, float, float, float]:
    """Probabilities of the net Bell-index shift (I, X, Z, Y) left by the final gates.

    Same fault model as :func:`fidelity_gate`: direct X and Z faults on the
    surviving pair plus Y-class propagated faults whose parity matters. The
    first entry equals ``fidelity_gate(q, n)``.
    """
    q = _prob(q, "q")
    if q > 0.5:
        raise ValueError(f"q must lie in [0, 1/2], got {q!r}")
    d = (1.0 - 2.0 * q) ** (2.0 * float(n) - 2.0)
    even, odd = 0.5 * (1.0 + d), 0.5 * (1.0 - d)
    a, b = (1.0 - q) ** 2, q * q
    return (a * even + b * odd, q * (1.0 - q), q * (1.0 - q), a * odd + b * even)
