"""Batched Jacobi solvers for small dense complex matrices.

Both routines act on stacks of shape ``(batch, n, n)`` so that grid searches can
push hundreds of thousands of 4x4 matrices through one call. Pair sweeps run in
the fixed cyclic order (0,1), (0,2), ..., (n-2,n-1), which makes results
bit-for-bit reproducible.
"""

from __future__ import annotations

import numpy as np

TOL = 1e-12
MAX_ITER = 10_000

_TINY = 1e-300


class EigenSolverError(RuntimeError):
    """Raised when a Jacobi iteration fails to converge."""

    def __init__(self, message: str, iterations: int, residual: float):
        super().__init__(f"{message} (iterations={iterations}, residual={residual:.3e})")
        self.iterations = iterations
        self.residual = residual


def _pairs(n: int) -> list[tuple[int, int]]:
    return [(p, q) for p in range(n - 1) for q in range(p + 1, n)]


def _offdiag_norm(a: np.ndarray) -> np.ndarray:
    # a has the batch axis last
    n = a.shape[0]
    mask = ~np.eye(n, dtype=bool)
    return np.sqrt(np.sum(np.abs(a[mask]) ** 2, axis=0))


def hermitian_eig(
    a: np.ndarray, tol: float = TOL, max_iter: int = MAX_ITER
) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of Hermitian matrices by cyclic complex Jacobi rotations.

    Returns ``(w, v)`` with ``a[k] @ v[k] == v[k] * w[k]``. Eigenvalues are not
    sorted. A single matrix of shape ``(n, n)`` is accepted and returned unbatched.

    ``max_iter`` counts individual plane rotations; ``tol`` is relative to the
    Frobenius norm of each matrix.
    """
    single = np.ndim(a) == 2
    a = np.asarray(a, dtype=complex)
    if single:
        a = a[None]
    # work with the batch axis last so row/column updates are contiguous
    a = np.moveaxis(a, 0, -1).copy()
    n = a.shape[0]
    v = np.zeros_like(a)
    for i in range(n):
        v[i, i] = 1.0
    scale = np.maximum(np.sqrt(np.sum(np.abs(a) ** 2, axis=(0, 1))), _TINY)
    pairs = _pairs(n)
    iterations = 0
    off = _offdiag_norm(a)
    while np.any(off > tol * scale):
        if iterations >= max_iter:
            raise EigenSolverError(
                "Hermitian Jacobi did not converge", iterations, float(np.max(off / scale))
            )
        for p, q in pairs:
            apq = a[p, q]
            mag = np.abs(apq)
            active = mag > tol * scale * 1e-3
            if not np.any(active):
                continue
            safe = np.where(active, mag, 1.0)
            phase = np.where(active, apq / safe, 1.0)
            tau = (a[q, q].real - a[p, p].real) / (2.0 * safe)
            t = np.copysign(1.0, tau) / (np.abs(tau) + np.sqrt(1.0 + tau * tau))
            t[~active] = 0.0
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            sph = s * phase
            scph = np.conj(sph)
            cph = c * np.conj(phase)
            # a <- G^H a G with G = diag(1, conj(phase)) @ [[c, s], [-s, c]] on (p, q)
            cp = a[:, p].copy()
            a[:, p] = c * cp - scph * a[:, q]
            a[:, q] = s * cp + cph * a[:, q]
            rp = a[p].copy()
            a[p] = c * rp - sph * a[q]
            a[q] = s * rp + np.conj(cph) * a[q]
            a[p, q] = 0.0
            a[q, p] = 0.0
            vp = v[:, p].copy()
            v[:, p] = c * vp - scph * v[:, q]
            v[:, q] = s * vp + cph * v[:, q]
        iterations += len(pairs)
        off = _offdiag_norm(a)
    w = np.real(np.diagonal(a, axis1=0, axis2=1)).copy()
    v = np.moveaxis(v, -1, 0)
    if single:
        return w[0], v[0]
    return w, v


def singular_values(
    a: np.ndarray, tol: float = TOL, max_iter: int = MAX_ITER
) -> np.ndarray:
    """Singular values by one-sided (Hestenes) Jacobi, sorted in decreasing order.

    Column pairs are rotated until mutually orthogonal; the column norms are then
    the singular values. Unlike squaring the matrix, this keeps tiny singular
    values accurate to machine precision relative to the largest one.
    """
    single = np.ndim(a) == 2
    a = np.asarray(a, dtype=complex)
    if single:
        a = a[None]
    # columns as leading axis, batch last: cols[j] is an (m, batch) block
    cols = np.transpose(a, (2, 1, 0)).copy()
    n = cols.shape[0]
    pairs = _pairs(n)
    iterations = 0
    while True:
        worst = np.zeros(cols.shape[-1])
        for p, q in pairs:
            cp = cols[p]
            cq = cols[q]
            alpha = np.sum(cp.real**2 + cp.imag**2, axis=0)
            beta = np.sum(cq.real**2 + cq.imag**2, axis=0)
            gamma = np.sum(np.conj(cp) * cq, axis=0)
            mag = np.abs(gamma)
            ratio = mag / np.maximum(np.sqrt(alpha * beta), _TINY)
            np.maximum(worst, ratio, out=worst)
            active = ratio > tol
            if not np.any(active):
                continue
            safe = np.where(active, mag, 1.0)
            phase = np.where(active, gamma / safe, 1.0)
            zeta = (beta - alpha) / (2.0 * safe)
            t = np.copysign(1.0, zeta) / (np.abs(zeta) + np.sqrt(1.0 + zeta * zeta))
            t[~active] = 0.0
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            cq = cq * np.conj(phase)
            new_p = c * cp - s * cq
            cols[q] = s * cp + c * cq
            cols[p] = new_p
        iterations += len(pairs)
        if np.all(worst <= tol):
            break
        if iterations >= max_iter:
            raise EigenSolverError(
                "one-sided Jacobi did not converge", iterations, float(np.max(worst))
            )
    sv = np.sqrt(np.sum(cols.real**2 + cols.imag**2, axis=1)).T
    sv = -np.sort(-sv, axis=1)
    return sv[0] if single else sv
