"""Exact check that the most damaging one-sided unitary fault is a Pauli.

A Bell-diagonal pair is hit by ``U x 1`` with probability p, for U = exp(-i theta n.sigma)
scanned over a grid of angles and axes. The exact output is kept as a 4x4 matrix
and its entanglement of formation computed through the concurrence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bell import (
    PAULI,
    PAULI_INDEX,
    BellDiagonal,
    DensityMatrix4,
    bell_to_matrix,
    bell_weights,
    concurrence_batch,
    eof_from_concurrence,
    permute_weights,
)

MIN_STEPS = 16
DEFAULT_STEPS = 64
TIE_TOL = 1e-12
CHUNK = 32768


@dataclass(frozen=True)
class UnitaryAxisAngle:
    theta: float
    axis: tuple[float, float, float]

    def __post_init__(self):
        if not (0.0 <= self.theta <= math.pi + 1e-12):
            raise ValueError(f"theta must lie in [0, pi], got {self.theta!r}")
        norm2 = sum(c * c for c in self.axis)
        if abs(norm2 - 1.0) > 1e-12:
            raise ValueError(f"axis must have unit norm, |axis|^2 = {norm2!r}")

    @classmethod
    def from_angles(cls, theta: float, polar: float, azimuth: float) -> "UnitaryAxisAngle":
        axis = (
            math.sin(polar) * math.cos(azimuth),
            math.sin(polar) * math.sin(azimuth),
            math.cos(polar),
        )
        return cls(float(theta), axis)

    def matrix(self) -> np.ndarray:
        return _unitaries(np.array([self.theta]), np.array([self.axis]))[0]


def _unitaries(theta: np.ndarray, axes: np.ndarray) -> np.ndarray:
    nsig = np.einsum("bk,kij->bij", axes, np.stack([PAULI["X"], PAULI["Y"], PAULI["Z"]]))
    c = np.cos(theta)[:, None, None]
    s = np.sin(theta)[:, None, None]
    return c * np.eye(2) - 1j * s * nsig


def _channel_batch(weights: np.ndarray, p: float, us: np.ndarray) -> np.ndarray:
    rho = bell_to_matrix(weights)
    ul = np.einsum("bij,kl->bikjl", us, np.eye(2)).reshape(-1, 4, 4)
    return (1.0 - p) * rho + p * ul @ rho @ np.conj(np.swapaxes(ul, 1, 2))


def _check_p(p: float) -> float:
    p = float(p)
    if not (0.0 <= p <= 1.0):
        raise ValueError(f"p must lie in [0, 1], got {p!r}")
    return p


def unitary_noise_channel(state: BellDiagonal, p: float, u: UnitaryAxisAngle) -> DensityMatrix4:
    """(1-p) rho + p (U x 1) rho (U x 1)^dagger for a Bell-diagonal rho."""
    p = _check_p(p)
    out = _channel_batch(state.weights, p, u.matrix()[None])[0]
    return DensityMatrix4(0.5 * (out + out.conj().T))


def pauli_mixture(weights: np.ndarray, probs: dict[str, float]) -> np.ndarray:
    """Bell weights after Pauli flips on one qubit with the given probabilities."""
    out = (1.0 - sum(probs.values())) * np.asarray(weights, dtype=float)
    for name, prob in probs.items():
        out = out + prob * permute_weights(weights, PAULI_INDEX[name])
    return out


def twirled_mixing_check(state: BellDiagonal, p: float, u: UnitaryAxisAngle) -> float:
    """Largest weight discrepancy between the twirled exact output and Pauli mixing
    with probabilities p n_i^2 sin^2(theta)."""
    exact = bell_weights(unitary_noise_channel(state, p, u).matrix)
    s2 = math.sin(u.theta) ** 2
    nx, ny, nz = u.axis
    mixed = pauli_mixture(state.weights, {"X": p * nx * nx * s2, "Y": p * ny * ny * s2, "Z": p * nz * nz * s2})
    return float(np.max(np.abs(exact - mixed)))


def pauli_flip_eofs(state: BellDiagonal, p: float) -> dict[str, float]:
    """Entanglement after a single Pauli fault with probability p, for X, Y and Z."""
    out = {}
    for name in ("X", "Y", "Z"):
        w = pauli_mixture(state.weights, {name: p})
        out[name] = float(eof_from_concurrence(max(0.0, 2.0 * w.max() - 1.0)))
    return out


@dataclass(frozen=True)
class UnitaryGrid:
    """Lexicographic (theta, polar, azimuth) grid; ``steps`` count intervals.

    Theta and polar include both endpoints of [0, pi]; the azimuth covers
    [0, 2 pi) without repeating 2 pi. With steps divisible by 4 every Pauli
    rotation (theta = pi/2, coordinate axis) is an exact grid point.
    """

    theta_steps: int = DEFAULT_STEPS
    axis_steps: int = DEFAULT_STEPS

    def __post_init__(self):
        if self.theta_steps < MIN_STEPS or self.axis_steps < MIN_STEPS:
            raise ValueError(f"grid resolutions must be >= {MIN_STEPS}")

    @property
    def thetas(self) -> np.ndarray:
        return np.linspace(0.0, math.pi, self.theta_steps + 1)

    @property
    def polars(self) -> np.ndarray:
        return np.linspace(0.0, math.pi, self.axis_steps + 1)

    @property
    def azimuths(self) -> np.ndarray:
        return np.arange(self.axis_steps) * (2.0 * math.pi / self.axis_steps)

    def points(self) -> np.ndarray:
        t, po, az = np.meshgrid(self.thetas, self.polars, self.azimuths, indexing="ij")
        return np.stack([t.ravel(), po.ravel(), az.ravel()], axis=1)

    @property
    def theta_step(self) -> float:
        return math.pi / self.theta_steps

    @property
    def axis_step(self) -> float:
        return math.pi / self.axis_steps


@dataclass(frozen=True)
class Landscape:
    points: np.ndarray  # (N, 3) theta, polar, azimuth
    eof: np.ndarray  # exact entanglement of formation
    eof_twirled: np.ndarray  # entanglement of the twirled state's singlet fidelity


def eof_landscape(state: BellDiagonal, p: float, grid: UnitaryGrid) -> Landscape:
    p = _check_p(p)
    pts = grid.points()
    exact = np.empty(len(pts))
    twirled = np.empty(len(pts))
    w = state.weights
    for start in range(0, len(pts), CHUNK):
        chunk = pts[start : start + CHUNK]
        th, po, az = chunk.T
        axes = np.stack([np.sin(po) * np.cos(az), np.sin(po) * np.sin(az), np.cos(po)], axis=1)
        rhos = _channel_batch(w, p, _unitaries(th, axes))
        exact[start : start + CHUNK] = eof_from_concurrence(concurrence_batch(rhos))
        fid = bell_weights(rhos)[:, 0]
        twirled[start : start + CHUNK] = eof_from_concurrence(np.maximum(0.0, 2.0 * fid - 1.0))
    return Landscape(pts, exact, twirled)


@dataclass(frozen=True)
class WorstUnitary:
    unitary: UnitaryAxisAngle
    eof: float
    theta: float
    polar: float
    azimuth: float
    flat: bool = False
    ties: int = 1

    def nearest_pauli(self) -> str:
        """Coordinate axis closest to the minimiser's axis."""
        k = int(np.argmax(np.abs(self.unitary.axis)))
        return "XYZ"[k]


def worst_unitary_search(
    state: BellDiagonal,
    p: float,
    theta_steps: int = DEFAULT_STEPS,
    axis_steps: int = DEFAULT_STEPS,
    landscape: Landscape | None = None,
) -> WorstUnitary:
    """Grid minimum of the exact entanglement over one-sided unitary faults.

    Values within ``TIE_TOL`` of the minimum count as ties and the first in
    lexicographic (theta, polar, azimuth) order wins; ``ties`` counts them. When
    the fault can make the output separable, whole regions tie at zero and the
    reported point need not be a Pauli; see :func:`minimizing_points`. For p = 0
    the landscape is flat and the identity (first grid point) is reported with
    ``flat=True``.
    """
    if state.fidelity() <= 0.5:
        raise ValueError("state fidelity must exceed 1/2")
    grid = UnitaryGrid(theta_steps, axis_steps)
    if landscape is None:
        landscape = eof_landscape(state, p, grid)
    values = landscape.eof
    lo = values.min()
    flat = bool(values.max() - lo <= TIE_TOL)
    tied = np.flatnonzero(values <= lo + TIE_TOL)
    k = int(tied[0])
    th, po, az = landscape.points[k]
    return WorstUnitary(
        UnitaryAxisAngle.from_angles(th, po, az),
        float(values[k]),
        float(th),
        float(po),
        float(az),
        flat,
        len(tied),
    )


def minimizing_points(landscape: Landscape, tol: float = TIE_TOL) -> np.ndarray:
    """All grid points whose entanglement is within ``tol`` of the minimum."""
    values = landscape.eof
    return landscape.points[values <= values.min() + tol]


def pauli_points(grid: UnitaryGrid) -> np.ndarray:
    """Indices of the grid points that are Pauli rotations (theta = pi/2, coordinate axis)."""
    pts = grid.points()
    th, po, az = pts.T
    axes = np.stack([np.sin(po) * np.cos(az), np.sin(po) * np.sin(az), np.cos(po)], axis=1)
    on_axis = np.max(np.abs(axes), axis=1) >= 1.0 - 1e-12
    return np.flatnonzero(on_axis & (np.abs(th - math.pi / 2) <= 1e-12))


def axis_distance_to_coordinate(axis) -> float:
    """Angle between ``axis`` and the nearest of +-e_x, +-e_y, +-e_z."""
    a = np.abs(np.asarray(axis, dtype=float))
    return float(math.acos(min(1.0, a.max())))
