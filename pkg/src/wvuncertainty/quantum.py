"""Pure states, expectation values, the state seminorm and second moments."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InternalConsistencyError, NotNormalized
from .linops import as_matrix

NORM_TOL = 1e-8
VARIANCE_CLAMP = 1e-12


@dataclass(frozen=True)
class PhysicsConfig:
    hbar: float = 1.0

    def __post_init__(self):
        if not self.hbar > 0:
            raise ValueError(f"hbar must be positive, got {self.hbar}")


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized state vector.  Construction validates, it never renormalizes."""

    amplitudes: np.ndarray
    norm_tol: float = NORM_TOL

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.ndim != 1 or amps.shape[0] < 1:
            raise DimensionMismatch(f"state must be a non-empty vector, got shape {amps.shape}")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > self.norm_tol:
            raise NotNormalized(f"state norm {norm!r} differs from 1 by more than {self.norm_tol:g}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.amplitudes, dtype=dtype)


def normalize(vector) -> PureState:
    """Explicit ingestion helper: scale ``vector`` to unit norm."""
    v = np.asarray(vector, dtype=np.complex128)
    norm = np.linalg.norm(v)
    if norm == 0:
        raise NotNormalized("cannot normalize the zero vector")
    return PureState(v / norm)


def bloch_state(theta: float, phi: float) -> PureState:
    """Qubit state (cos(theta/2), e^{i phi} sin(theta/2)) in the sigma_z basis."""
    return PureState(np.array([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)]))


def as_state(psi) -> PureState:
    return psi if isinstance(psi, PureState) else PureState(psi)


def _vec(psi) -> np.ndarray:
    return psi.amplitudes if isinstance(psi, PureState) else np.asarray(psi, dtype=np.complex128)


def _check_dims(X: np.ndarray, v: np.ndarray) -> None:
    if X.shape[0] != v.shape[0]:
        raise DimensionMismatch(f"operator is {X.shape[0]}-dimensional but state has {v.shape[0]} entries")


def expectation(X, psi) -> complex:
    """<psi|X|psi>."""
    X = as_matrix(X)
    v = _vec(psi)
    _check_dims(X, v)
    return complex(np.vdot(v, X @ v))


def seminorm(X, psi) -> float:
    """sqrt(<psi|X^dagger X|psi>), i.e. the Euclidean norm of X|psi>."""
    X = as_matrix(X)
    v = _vec(psi)
    _check_dims(X, v)
    return float(np.linalg.norm(X @ v))


def centered(X, psi) -> np.ndarray:
    """X - <X> I, using the real part of the mean."""
    X = as_matrix(X)
    return X - expectation(X, psi).real * np.eye(X.shape[0])


def clamp_variance(value: float, tol: float = VARIANCE_CLAMP) -> float:
    if value >= 0:
        return value
    if value >= -tol:
        return 0.0
    raise InternalConsistencyError(f"variance {value!r} is negative beyond round-off")


def variance(X, psi) -> float:
    return clamp_variance(seminorm(centered(X, psi), psi) ** 2)


def std(X, psi) -> float:
    return np.sqrt(variance(X, psi))


@dataclass(frozen=True)
class MomentReport:
    mean_a: float
    mean_b: float
    var_a: float
    var_b: float
    cov: float
    commutator_half: complex
    anticommutator_half: float

    @property
    def sigma_a(self) -> float:
        return float(np.sqrt(self.var_a))

    @property
    def sigma_b(self) -> float:
        return float(np.sqrt(self.var_b))


def moments(A, B, psi) -> MomentReport:
    A = as_matrix(A)
    B = as_matrix(B)
    v = _vec(psi)
    _check_dims(A, v)
    _check_dims(B, v)
    Av, Bv = A @ v, B @ v
    mean_a = np.vdot(v, Av).real
    mean_b = np.vdot(v, Bv).real
    # <AB> = (A psi)^dagger (B psi) for Hermitian A
    ab = np.vdot(Av, Bv)
    ba = np.conj(ab)
    anti = float(((ab + ba) / 2).real)
    return MomentReport(
        mean_a=float(mean_a),
        mean_b=float(mean_b),
        var_a=clamp_variance(float(np.linalg.norm(Av - mean_a * v) ** 2)),
        var_b=clamp_variance(float(np.linalg.norm(Bv - mean_b * v) ** 2)),
        cov=anti - float(mean_a * mean_b),
        commutator_half=complex((ab - ba) / 2),
        anticommutator_half=anti,
    )


def commutator(X, Y) -> np.ndarray:
    X, Y = as_matrix(X), as_matrix(Y)
    return X @ Y - Y @ X


def anticommutator(X, Y) -> np.ndarray:
    X, Y = as_matrix(X), as_matrix(Y)
    return X @ Y + Y @ X


PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
