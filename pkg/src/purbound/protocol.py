"""Exact density-matrix simulation of recursive two-pair purification.

Qubits are ordered (A1, B1, A2, B2): pair one is (A1, B1) and survives, pair two
is (A2, B2) and is measured. Alice holds A1, A2 and Bob holds B1, B2. Both
protocols work in the phi+ frame, so Alice first applies Y to each pair (this maps
the singlet onto phi+) and undoes it on the surviving pair at the end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .bell import PAULI, BellDiagonal, bell_to_matrix, bell_weights, permute_weights

NOISE_MODELS = ("depolarizing", "adversarial-xz", "none")
PROTOCOLS = ("bbpssw", "dejmps")
SUCCESS_FLOOR = 1e-12
CONVERGENCE_TOL = 1e-10
VERDICT_TOL = 1e-9
MAX_ROUNDS = 200
Q_SEARCH = (0.0, 0.2)
Q_TOL = 1e-5

UP, DOWN, STATIONARY = "converged-up", "converged-down", "stationary"

A1, B1, A2, B2 = range(4)
ALICE = (A1, A2)


class PostSelectionError(ZeroDivisionError):
    """Every measurement outcome was rejected."""


class NoTransitionError(RuntimeError):
    pass


@dataclass(frozen=True)
class GateNoiseSpec:
    """Per-qubit fault channel inserted after every two-qubit gate.

    ``depolarizing`` applies X, Y or Z with probability q/3 each. ``adversarial-xz``
    applies X on Alice's qubits and Z on Bob's, each with probability q.
    ``measurement_flip`` flips each computational-basis outcome.
    """

    model: str = "none"
    q: float = 0.0
    measurement_flip: float = 0.0

    def __post_init__(self):
        if self.model not in NOISE_MODELS:
            raise ValueError(f"unknown noise model {self.model!r}; expected one of {NOISE_MODELS}")
        for name in ("q", "measurement_flip"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ValueError(f"{name} must lie in [0, 1], got {v!r}")

    def channel(self, qubit: int) -> dict[str, float]:
        if self.model == "none" or self.q == 0.0:
            return {}
        if self.model == "depolarizing":
            return {"X": self.q / 3.0, "Y": self.q / 3.0, "Z": self.q / 3.0}
        return {"X": self.q} if qubit in ALICE else {"Z": self.q}


@dataclass(frozen=True)
class RecursionTrace:
    rounds: tuple[tuple[float, float], ...]
    verdict: str
    f0: float = field(default=math.nan)

    @property
    def final_fidelity(self) -> float:
        return self.rounds[-1][0] if self.rounds else self.f0


def _embed(op: np.ndarray, qubit: int) -> np.ndarray:
    mats = [np.eye(2, dtype=complex)] * 4
    mats[qubit] = op
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


@lru_cache(maxsize=None)
def _single(name: str, qubit: int) -> np.ndarray:
    return _embed(PAULI[name], qubit)


def _rx(angle: float) -> np.ndarray:
    return math.cos(angle / 2) * np.eye(2) - 1j * math.sin(angle / 2) * PAULI["X"]


@lru_cache(maxsize=None)
def _cnot(control: int, target: int) -> np.ndarray:
    dim = 16
    m = np.zeros((dim, dim), dtype=complex)
    for i in range(dim):
        bits = [(i >> (3 - k)) & 1 for k in range(4)]
        if bits[control]:
            bits[target] ^= 1
        j = sum(b << (3 - k) for k, b in enumerate(bits))
        m[j, i] = 1.0
    return m


@lru_cache(maxsize=None)
def _local_prelude(protocol: str) -> np.ndarray:
    # Y on Alice's half of both pairs, then the protocol's local rotations
    u = _single("Y", A1) @ _single("Y", A2)
    if protocol == "dejmps":
        for qubit, angle in ((A1, math.pi / 2), (A2, math.pi / 2), (B1, -math.pi / 2), (B2, -math.pi / 2)):
            u = _embed(_rx(angle), qubit) @ u
    return u


@lru_cache(maxsize=None)
def _coincidence_projectors() -> tuple[np.ndarray, np.ndarray]:
    p0 = np.diag([1.0, 0.0]).astype(complex)
    p1 = np.diag([0.0, 1.0]).astype(complex)
    return _embed(p0, A2) @ _embed(p0, B2), _embed(p1, A2) @ _embed(p1, B2)


def _pauli_channel(rho: np.ndarray, qubit: int, probs: dict[str, float]) -> np.ndarray:
    if not probs:
        return rho
    out = (1.0 - sum(probs.values())) * rho
    for name, prob in probs.items():
        if prob:
            op = _single(name, qubit)
            out = out + prob * (op @ rho @ op)
    return out


def _partial_trace_second_pair(rho: np.ndarray) -> np.ndarray:
    t = rho.reshape(4, 4, 4, 4)  # (pair1, pair2, pair1', pair2')
    return np.einsum("ajbj->ab", t)


def purification_round(
    a: BellDiagonal, b: BellDiagonal, noise: GateNoiseSpec, protocol: str = "bbpssw"
) -> tuple[float, BellDiagonal]:
    """One bilateral-CNOT round on two pairs; returns (success probability, output pair)."""
    if protocol not in PROTOCOLS:
        raise ValueError(f"unknown protocol {protocol!r}; expected one of {PROTOCOLS}")
    rho = np.kron(bell_to_matrix(a.weights), bell_to_matrix(b.weights))
    u = _local_prelude(protocol)
    rho = u @ rho @ u.conj().T
    for control, target in ((A1, A2), (B1, B2)):
        g = _cnot(control, target)
        rho = g @ rho @ g.T
        rho = _pauli_channel(rho, control, noise.channel(control))
        rho = _pauli_channel(rho, target, noise.channel(target))
    if noise.measurement_flip:
        for qubit in (A2, B2):
            rho = _pauli_channel(rho, qubit, {"X": noise.measurement_flip})
    kept = np.zeros((4, 4), dtype=complex)
    for proj in _coincidence_projectors():
        kept += _partial_trace_second_pair(proj @ rho @ proj)
    success = float(np.real(np.trace(kept)))
    if success <= SUCCESS_FLOOR:
        raise PostSelectionError(f"post-selection probability {success!r} is zero")
    y = np.kron(PAULI["Y"], np.eye(2))
    out = y @ (kept / success) @ y
    return success, BellDiagonal.from_weights(bell_weights(out))


def _phi_frame(w: np.ndarray) -> tuple[float, float, float, float]:
    # (phi+, psi-, psi+, phi-) weights after Alice's Y
    v = permute_weights(np.asarray(w, dtype=float), 3)
    return v[3], v[0], v[2], v[1]


def _from_phi_frame(phi_p: float, psi_m: float, psi_p: float, phi_m: float) -> np.ndarray:
    v = np.array([psi_m, phi_m, psi_p, phi_p])
    return permute_weights(v, 3)


def bbpssw_recurrence(a: BellDiagonal, b: BellDiagonal) -> tuple[float, BellDiagonal]:
    """Noiseless bilateral-CNOT round on Bell-diagonal inputs, in closed form."""
    A1_, B1_, C1, D1 = _phi_frame(a.weights)
    A2_, B2_, C2, D2 = _phi_frame(b.weights)
    n = (A1_ + D1) * (A2_ + D2) + (B1_ + C1) * (B2_ + C2)
    out = _from_phi_frame(
        (A1_ * A2_ + D1 * D2) / n,
        (C1 * B2_ + B1_ * C2) / n,
        (B1_ * B2_ + C1 * C2) / n,
        (A1_ * D2 + D1 * A2_) / n,
    )
    return n, BellDiagonal.from_weights(out)


def dejmps_recurrence(a: BellDiagonal, b: BellDiagonal) -> tuple[float, BellDiagonal]:
    """Noiseless DEJMPS round in closed form (the rotations swap phi- and psi-)."""
    A1_, B1_, C1, D1 = _phi_frame(a.weights)
    A2_, B2_, C2, D2 = _phi_frame(b.weights)
    n = (A1_ + B1_) * (A2_ + B2_) + (C1 + D1) * (C2 + D2)
    out = _from_phi_frame(
        (A1_ * A2_ + B1_ * B2_) / n,
        (C1 * D2 + D1 * C2) / n,
        (C1 * C2 + D1 * D2) / n,
        (A1_ * B2_ + B1_ * A2_) / n,
    )
    return n, BellDiagonal.from_weights(out)


def _verdict(f0: float, final: float) -> str:
    if final > f0 + VERDICT_TOL:
        return UP
    if final < f0 - VERDICT_TOL:
        return DOWN
    return STATIONARY


def recurse_to_fixed_point(
    f0: float, noise: GateNoiseSpec, protocol: str = "bbpssw", max_rounds: int = MAX_ROUNDS
) -> RecursionTrace:
    """Iterate rounds on identical copies of a Werner state until the fidelity settles.

    BBPSSW re-twirls to a Werner state between rounds; DEJMPS carries the full
    Bell-diagonal state. The verdict compares the last fidelity with ``f0``.
    """
    if not (0.25 <= f0 <= 1.0):
        raise ValueError(f"f0 must lie in [1/4, 1], got {f0!r}")
    if not (1 <= max_rounds <= MAX_ROUNDS):
        raise ValueError(f"max_rounds must lie in [1, {MAX_ROUNDS}], got {max_rounds!r}")
    state = BellDiagonal.werner(f0)
    rounds = []
    previous = f0
    for _ in range(max_rounds):
        success, out = purification_round(state, state, noise, protocol)
        fid = out.fidelity()
        rounds.append((fid, success))
        state = BellDiagonal.werner(fid) if protocol == "bbpssw" else out
        if abs(fid - previous) < CONVERGENCE_TOL:
            break
        previous = fid
    return RecursionTrace(tuple(rounds), _verdict(f0, rounds[-1][0]), f0)


def protocol_threshold(
    noise_model: str,
    protocol: str,
    f0: float,
    tol: float = Q_TOL,
    q_range: tuple[float, float] = Q_SEARCH,
    max_rounds: int = MAX_ROUNDS,
) -> float:
    """Gate error rate where recursion from ``f0`` stops converging upward."""
    if not f0 > 0.5:
        raise ValueError(f"f0 must exceed 1/2, got {f0!r}")

    def purifies(q: float) -> bool:
        trace = recurse_to_fixed_point(f0, GateNoiseSpec(noise_model, q), protocol, max_rounds)
        return trace.verdict == UP

    lo, hi = q_range
    if noise_model == "none" or not purifies(lo) or purifies(hi):
        raise NoTransitionError(
            f"no transition between purifying and not purifying for q in [{lo}, {hi}] "
            f"(noise={noise_model}, protocol={protocol}, f0={f0})"
        )
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if purifies(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
