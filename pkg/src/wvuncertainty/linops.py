"""Dense complex linear algebra: Hermitian eigensolver and unitary exponentials.

The eigensolver is a cyclic complex Jacobi method in round-robin (parallel)
ordering.  Each rotation first removes the phase of the pivot element and then
applies a real Givens rotation, so the combined 2x2 unitary is
``[[c, s], [-s e^{-ia}, c e^{-ia}]]``.  Every sweep visits each off-diagonal
pair exactly once, n/2 disjoint pairs at a time.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceFailure, DimensionMismatch, NonHermitianInput

HERMITIAN_TOL = 1e-10
RECONSTRUCTION_TOL = 1e-10
PHASE_TOL = 1e-8
MAX_SWEEPS = 60


@dataclass(frozen=True)
class HermitianCheckReport:
    max_asymmetry: float

    def is_hermitian(self, tol: float = HERMITIAN_TOL) -> bool:
        return self.max_asymmetry <= tol


@dataclass(frozen=True)
class EigenSystem:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sweeps: int = 0

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    def reconstruct(self) -> np.ndarray:
        V = self.eigenvectors
        return (V * self.eigenvalues) @ V.conj().T


def as_matrix(M) -> np.ndarray:
    """Return ``M`` as a square complex128 array."""
    M = np.asarray(M, dtype=np.complex128)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {M.shape}")
    return M


def check_hermitian(M, tol: float = HERMITIAN_TOL) -> HermitianCheckReport:
    M = as_matrix(M)
    asym = float(np.max(np.abs(M - M.conj().T))) if M.size else 0.0
    return HermitianCheckReport(max_asymmetry=asym)


def require_hermitian(M, tol: float = HERMITIAN_TOL, name: str = "matrix") -> np.ndarray:
    M = as_matrix(M)
    report = check_hermitian(M, tol)
    if not report.is_hermitian(tol):
        raise NonHermitianInput(
            f"{name} is not Hermitian (max asymmetry {report.max_asymmetry:.3g} > {tol:g})",
            report.max_asymmetry,
        )
    return M


def _fix_phases(V: np.ndarray, tol: float = PHASE_TOL) -> np.ndarray:
    # first component with modulus > tol becomes real positive
    V = V.copy()
    for k in range(V.shape[1]):
        col = V[:, k]
        big = np.flatnonzero(np.abs(col) > tol)
        if big.size:
            lead = col[big[0]]
            V[:, k] = col * (abs(lead) / lead)
    return V


def _round_robin(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    # circle-method pairing: n-1 rounds (n even) of disjoint (p, q) pairs covering every p<q once
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        pairs = [(players[i], players[m - 1 - i]) for i in range(m // 2)]
        pairs = [(min(a, b), max(a, b)) for a, b in pairs if a < n and b < n]
        rounds.append((np.array([a for a, _ in pairs]), np.array([b for _, b in pairs])))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def _jacobi(M: np.ndarray, max_sweeps: int) -> tuple[np.ndarray, np.ndarray, int]:
    n = M.shape[0]
    # symmetrize away sub-tolerance asymmetry so every rotation sees an exact Hermitian
    A = 0.5 * (M + M.conj().T)
    V = np.eye(n, dtype=np.complex128)
    scale = np.linalg.norm(A)
    if n == 1 or scale == 0.0:
        return A.diagonal().real.copy(), V, 0

    stop = 1e-15 * scale
    rounds = _round_robin(n)
    for sweep in range(1, max_sweeps + 1):
        for P, Q in rounds:
            apq = A[P, Q]
            r = np.abs(apq)
            live = r > 1e-300
            if not live.any():
                continue
            P, Q, apq, r = P[live], Q[live], apq[live], r[live]
            theta = 0.5 * np.arctan2(2.0 * r, A[Q, Q].real - A[P, P].real)
            c, s = np.cos(theta), np.sin(theta)
            e = np.conj(apq) / r  # e^{-ia}
            # disjoint rotations commute, so one unitary applies the whole round
            G = np.eye(n, dtype=np.complex128)
            G[P, P] = c
            G[P, Q] = s
            G[Q, P] = -s * e
            G[Q, Q] = c * e
            A = G.conj().T @ A @ G
            A[P, Q] = 0.0
            A[Q, P] = 0.0
            A[np.diag_indices(n)] = A.diagonal().real
            V = V @ G
        off = np.linalg.norm(A - np.diag(A.diagonal()))
        if off <= stop:
            return A.diagonal().real.copy(), V, sweep
    raise ConvergenceFailure(f"Jacobi did not converge in {max_sweeps} sweeps (d={n})")


def eigh(M, hermitian_tol: float = HERMITIAN_TOL, residual_tol: float = RECONSTRUCTION_TOL,
         max_sweeps: int = MAX_SWEEPS) -> EigenSystem:
    """Eigendecomposition of a Hermitian matrix.

    Eigenvalues come back ascending.  Each eigenvector is rotated so that its
    first component with modulus above 1e-8 is real and positive, which makes
    the output a deterministic function of the input.

    Raises NonHermitianInput if ``M`` fails the hermiticity check and
    ConvergenceFailure if the sweep budget runs out or the reconstruction
    residual exceeds ``residual_tol * (1 + max|M|)``.
    """
    M = require_hermitian(M, hermitian_tol)
    w, V, sweeps = _jacobi(M, max_sweeps)
    order = np.argsort(w, kind="stable")
    w = w[order]
    V = _fix_phases(V[:, order])
    system = EigenSystem(eigenvalues=w, eigenvectors=V, sweeps=sweeps)

    bound = residual_tol * (1.0 + float(np.max(np.abs(M))))
    recon = float(np.max(np.abs(M - system.reconstruct())))
    ortho = float(np.max(np.abs(V.conj().T @ V - np.eye(M.shape[0]))))
    if recon > bound or ortho > residual_tol:
        raise ConvergenceFailure(
            f"eigensystem residuals too large (reconstruction {recon:.3g}, orthonormality {ortho:.3g})"
        )
    return system


def generator_exponential(A, s: float, system: EigenSystem | None = None) -> np.ndarray:
    """Return ``exp(-i s A)`` for Hermitian ``A``.

    Pass a precomputed ``system`` to skip the eigendecomposition.
    """
    if system is None:
        system = eigh(A)
    V = system.eigenvectors
    return (V * np.exp(-1j * s * system.eigenvalues)) @ V.conj().T
