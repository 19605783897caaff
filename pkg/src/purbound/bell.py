"""Bell-basis algebra and two-qubit entanglement measures.

The Bell basis is always ordered singlet first: (psi-, phi-, psi+, phi+). In this
order the Bell index of a state equals the bit pattern ``x + 2*z`` of the Pauli
that maps the singlet onto it when applied to one qubit (I, X, Z, Y), so Pauli
composition modulo phase is XOR on indices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import hermitian_eig, singular_values
from .solvers import bisect

WEIGHT_TOL = 1e-12
HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
EIG_FLOOR = 1e-14

BELL_LABELS = ("psi-", "phi-", "psi+", "phi+")

_S = 1.0 / math.sqrt(2.0)
# columns are |psi->, |phi->, |psi+>, |phi+> in the basis |00>,|01>,|10>,|11>
BELL_BASIS = np.array(
    [
        [0.0, _S, 0.0, _S],
        [_S, 0.0, _S, 0.0],
        [-_S, 0.0, _S, 0.0],
        [0.0, -_S, 0.0, _S],
    ],
    dtype=complex,
)
BELL_BASIS.setflags(write=False)

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
for _m in PAULI.values():
    _m.setflags(write=False)

_YY = np.kron(PAULI["Y"], PAULI["Y"])

# Bell-index shift caused by a Pauli on either qubit (phases dropped).
PAULI_INDEX = {"I": 0, "X": 1, "Z": 2, "Y": 3}
INDEX_PAULI = {v: k for k, v in PAULI_INDEX.items()}


def _check_probability(x: float, name: str = "x") -> float:
    x = float(x)
    if not (0.0 <= x <= 1.0):
        raise ValueError(f"{name} must lie in [0, 1], got {x!r}")
    return x


@dataclass(frozen=True)
class BellDiagonal:
    """Two-qubit state diagonal in the Bell basis; fidelity is the singlet weight."""

    w_psi_minus: float
    w_phi_minus: float
    w_psi_plus: float
    w_phi_plus: float

    def __post_init__(self):
        w = self.weights
        if np.any(~np.isfinite(w)) or np.any(w < -WEIGHT_TOL):
            raise ValueError(f"Bell weights must be nonnegative, got {tuple(w)}")
        if abs(w.sum() - 1.0) > WEIGHT_TOL:
            raise ValueError(f"Bell weights must sum to 1, got sum {w.sum()!r}")

    @property
    def weights(self) -> np.ndarray:
        return np.array(
            [self.w_psi_minus, self.w_phi_minus, self.w_psi_plus, self.w_phi_plus]
        )

    def fidelity(self) -> float:
        return self.w_psi_minus

    @classmethod
    def from_weights(cls, weights) -> "BellDiagonal":
        """Build from a length-4 vector, clamping round-off negatives and renormalising."""
        w = np.asarray(weights, dtype=float).reshape(4)
        if np.any(w < -WEIGHT_TOL):
            raise ValueError(f"Bell weights must be nonnegative, got {tuple(w)}")
        w = np.clip(w, 0.0, None)
        total = w.sum()
        if total <= 0.0:
            raise ValueError("Bell weights sum to zero")
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"Bell weights must sum to 1, got sum {total!r}")
        w = w / total
        return cls(*(float(x) for x in w))

    @classmethod
    def werner(cls, fidelity: float) -> "BellDiagonal":
        f = _check_probability(fidelity, "fidelity")
        r = (1.0 - f) / 3.0
        return cls(f, r, r, r)

    @classmethod
    def singlet(cls) -> "BellDiagonal":
        return cls(1.0, 0.0, 0.0, 0.0)

    def to_density(self) -> "DensityMatrix4":
        return DensityMatrix4(bell_to_matrix(self.weights))


def bell_to_matrix(weights) -> np.ndarray:
    """4x4 computational-basis matrix of a Bell-diagonal weight vector (or a stack)."""
    w = np.asarray(weights, dtype=float)
    return np.einsum("ik,...k,jk->...ij", BELL_BASIS, w, BELL_BASIS.conj())


@dataclass(frozen=True)
class DensityMatrix4:
    """Two-qubit density matrix in the basis |00>, |01>, |10>, |11>."""

    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (4, 4):
            raise ValueError(f"expected a 4x4 matrix, got shape {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(m) - 1.0) > TRACE_TOL:
            raise ValueError(f"density matrix trace is {np.trace(m).real!r}, not 1")
        w, _ = hermitian_eig(m)
        if w.min() < -PSD_TOL:
            raise ValueError(f"density matrix has negative eigenvalue {w.min()!r}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def pure(cls, psi) -> "DensityMatrix4":
        psi = np.asarray(psi, dtype=complex).reshape(4)
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()))

    @classmethod
    def maximally_mixed(cls) -> "DensityMatrix4":
        return cls(np.eye(4, dtype=complex) / 4.0)


@dataclass(frozen=True)
class TwoQubitPauli:
    """A Pauli on each qubit; global phase is ignored."""

    left: str = "I"
    right: str = "I"

    def __post_init__(self):
        for s in (self.left, self.right):
            if s not in PAULI_INDEX:
                raise ValueError(f"unknown Pauli {s!r}; expected one of I, X, Y, Z")

    @property
    def bell_shift(self) -> int:
        return PAULI_INDEX[self.left] ^ PAULI_INDEX[self.right]

    def compose(self, other: "TwoQubitPauli") -> "TwoQubitPauli":
        return TwoQubitPauli(
            INDEX_PAULI[PAULI_INDEX[self.left] ^ PAULI_INDEX[other.left]],
            INDEX_PAULI[PAULI_INDEX[self.right] ^ PAULI_INDEX[other.right]],
        )

    def matrix(self) -> np.ndarray:
        return np.kron(PAULI[self.left], PAULI[self.right])


def binary_entropy(x: float) -> float:
    """H(x) in bits, with 0 log 0 = 0."""
    x = _check_probability(x)
    if x == 0.0 or x == 1.0:
        return 0.0
    return -(x * math.log(x) + (1.0 - x) * math.log1p(-x)) / math.log(2.0)


def _eof_from_small(u: float) -> float:
    # entropy H(1/2 + r) written through u = 1/2 - r, which avoids cancellation
    # near separability where r -> 1/2
    if u <= 0.0:
        return 0.0
    return binary_entropy(min(u, 0.5))


def eof(fidelity: float) -> float:
    """Entanglement of formation of a Bell-diagonal state with singlet weight F.

    Zero for F <= 1/2, where the state is separable.
    """
    f = _check_probability(fidelity, "fidelity")
    if f <= 0.5:
        return 0.0
    r = math.sqrt(f * (1.0 - f))
    u = (f - 0.5) ** 2 / (0.5 + r)
    return _eof_from_small(u)


def eof_inverse(s: float, tol: float = 1e-12) -> float:
    """The fidelity in [1/2, 1] whose entanglement of formation is ``s``."""
    s = _check_probability(s, "s")
    if s == 0.0:
        return 0.5
    if s == 1.0:
        return 1.0
    return bisect(lambda f: eof(f) - s, 0.5, 1.0, tol=tol)


def twirl(rho: DensityMatrix4) -> BellDiagonal:
    """Bell-basis diagonal of ``rho`` (singlet fidelity is kept)."""
    return BellDiagonal.from_weights(bell_weights(rho.matrix))


def bell_weights(m: np.ndarray) -> np.ndarray:
    """Diagonal of one matrix or a stack of matrices in the Bell basis."""
    return np.real(np.einsum("ik,...ij,jk->...k", BELL_BASIS.conj(), m, BELL_BASIS))


def pauli_apply(state: BellDiagonal, op: TwoQubitPauli) -> BellDiagonal:
    return BellDiagonal(*permute_weights(state.weights, op.bell_shift))


def permute_weights(w: np.ndarray, shift: int) -> np.ndarray:
    idx = np.arange(4) ^ shift
    out = np.empty_like(w)
    out[..., idx] = w
    return out


def concurrence_batch(rhos: np.ndarray) -> np.ndarray:
    """Wootters concurrence of a stack of 4x4 density matrices.

    With rho = L L^H, the square roots of the eigenvalues of rho (Y x Y) rho* (Y x Y)
    are the singular values of L^H (Y x Y) L*, which avoids square roots of
    near-zero eigenvalues.
    """
    rhos = np.asarray(rhos, dtype=complex)
    mu, v = hermitian_eig(rhos)
    mu = np.where(mu > EIG_FLOOR, mu, 0.0)
    factor = v * np.sqrt(mu)[:, None, :]
    tilde = _YY @ np.conj(factor)
    m = np.conj(np.swapaxes(factor, 1, 2)) @ tilde
    lam = singular_values(m)
    c = lam[:, 0] - lam[:, 1] - lam[:, 2] - lam[:, 3]
    return np.clip(c, 0.0, 1.0)


def concurrence(rho: DensityMatrix4) -> float:
    return float(concurrence_batch(rho.matrix[None])[0])


def _entropy_array(u: np.ndarray) -> np.ndarray:
    u = np.clip(u, 0.0, 0.5)
    safe = np.where(u > 0.0, u, 1.0)
    h = -(u * np.log(safe) + (1.0 - u) * np.log1p(-u)) / math.log(2.0)
    return np.where(u > 0.0, h, 0.0)


def eof_from_concurrence(c) -> np.ndarray | float:
    """H(1/2 + sqrt(1 - C^2)/2), evaluated without cancellation for small C."""
    c = np.clip(np.asarray(c, dtype=float), 0.0, 1.0)
    u = c * c / (2.0 * (1.0 + np.sqrt(1.0 - c * c)))
    out = _entropy_array(u)
    return float(out) if out.ndim == 0 else out


def eof_general(rho: DensityMatrix4) -> float:
    """Entanglement of formation of an arbitrary two-qubit state, via concurrence."""
    return float(eof_from_concurrence(concurrence(rho)))
