"""Weak values as functions on the spectrum of B, and the operators built from them.

Everything here lives in the eigenbasis of a non-degenerate observable B.  A
function on the spectrum is a vector aligned with the ascending eigenvalues;
``operator_function`` turns it back into ``sum_i f_i |b_i><b_i|``.

The weak value of A for the transition psi -> b is

    A_w(b) = <b|A|psi> / <b|psi>,

and A|psi> = A_w(B)|psi> exactly.  The real part of A_w is the best proxy for
A among real functions of B in the state seminorm, and the imaginary part is
what is left over.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateSpectrum,
    DimensionMismatch,
    InternalConsistencyError,
    NoQuantumComponent,
    NonRealFunction,
    ZeroOverlap,
)
from .linops import as_matrix, eigh, require_hermitian
from .quantum import PureState, _vec, expectation, seminorm

DEGENERACY_TOL = 1e-8
OVERLAP_TOL = 1e-12
REALITY_TOL = 1e-12
IDENTITY_TOL = 1e-10
QUANTUM_FLOOR = 1e-10


@dataclass(frozen=True, eq=False)
class SpectralBasis:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    observable: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    def coefficients(self, psi) -> np.ndarray:
        """<b_i|psi> for every eigenvector."""
        v = _vec(psi)
        if v.shape[0] != self.dim:
            raise DimensionMismatch(f"basis is {self.dim}-dimensional, state has {v.shape[0]} entries")
        return self.eigenvectors.conj().T @ v

    def probabilities(self, psi) -> np.ndarray:
        return np.abs(self.coefficients(psi)) ** 2


@dataclass(frozen=True, eq=False)
class SpectrumFunction:
    """Complex values on the spectrum of B (ascending eigenvalue order)."""

    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=np.complex128).reshape(-1)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @classmethod
    def constant(cls, c: complex, dim: int) -> "SpectrumFunction":
        return cls(np.full(dim, c, dtype=np.complex128))

    def __len__(self) -> int:
        return self.values.shape[0]

    @property
    def is_real(self) -> bool:
        return bool(np.all(np.abs(self.values.imag) <= REALITY_TOL))

    @property
    def real(self) -> np.ndarray:
        return self.values.real.copy()

    def require_real(self) -> np.ndarray:
        if not self.is_real:
            raise NonRealFunction("function on the spectrum must be real-valued here")
        return self.values.real.copy()

    def shifted(self, c: float) -> "SpectrumFunction":
        return SpectrumFunction(self.values + c)

    def scaled(self, c: float) -> "SpectrumFunction":
        return SpectrumFunction(self.values * c)


@dataclass(frozen=True, eq=False)
class WeakValueProfile:
    values: np.ndarray
    overlaps: np.ndarray
    state: PureState
    basis: SpectralBasis
    observable: np.ndarray

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.overlaps) ** 2

    @property
    def real(self) -> SpectrumFunction:
        return SpectrumFunction(self.values.real)

    @property
    def imag(self) -> SpectrumFunction:
        return SpectrumFunction(self.values.imag)

    def weighted_mean(self) -> complex:
        return complex(np.sum(self.probabilities * self.values))

    def imag_norm(self) -> float:
        """||Im A_w(B)|| from the outcome weights."""
        return float(np.sqrt(np.sum(self.probabilities * self.values.imag ** 2)))


def spectral_basis(B, degeneracy_tol: float = DEGENERACY_TOL) -> SpectralBasis:
    """Eigenbasis of B, refusing repeated eigenvalues.

    Adjacent gaps are compared against ``degeneracy_tol`` times the spectral
    range, so a multiple of the identity is always degenerate.
    """
    B = require_hermitian(B, name="B")
    system = eigh(B)
    w = system.eigenvalues
    if w.shape[0] > 1:
        gaps = np.diff(w)
        span = w[-1] - w[0]
        if gaps.min() <= degeneracy_tol * span or span == 0.0:
            raise DegenerateSpectrum(
                f"B has (near-)repeated eigenvalues: min gap {gaps.min():.3g}, range {span:.3g}"
            )
    return SpectralBasis(eigenvalues=w, eigenvectors=system.eigenvectors, observable=B)


def as_basis(B) -> SpectralBasis:
    return B if isinstance(B, SpectralBasis) else spectral_basis(B)


def weak_value_profile(A, basis: SpectralBasis, psi, overlap_tol: float = OVERLAP_TOL) -> WeakValueProfile:
    A = require_hermitian(A, name="A")
    state = psi if isinstance(psi, PureState) else PureState(psi)
    if A.shape[0] != basis.dim:
        raise DimensionMismatch(f"A is {A.shape[0]}-dimensional, basis is {basis.dim}-dimensional")
    overlaps = basis.coefficients(state)
    p = np.abs(overlaps) ** 2
    if p.min() < overlap_tol:
        i = int(np.argmin(p))
        raise ZeroOverlap(
            f"|<b|psi>|^2 = {p[i]:.3g} at eigenvalue b = {basis.eigenvalues[i]:.6g} is below {overlap_tol:g}"
        )
    numer = basis.eigenvectors.conj().T @ (A @ state.amplitudes)
    values = numer / overlaps

    # mean identities hold exactly; drift beyond round-off means the inputs were inconsistent
    mean = np.sum(p * values)
    bound = IDENTITY_TOL * (1.0 + float(np.max(np.abs(A))))
    expected = expectation(A, state).real
    if abs(mean.imag) > bound or abs(mean.real - expected) > bound:
        raise InternalConsistencyError(
            f"weak-value mean identities violated: Im {mean.imag:.3g}, Re drift {mean.real - expected:.3g}"
        )
    values.setflags(write=False)
    return WeakValueProfile(values=values, overlaps=overlaps, state=state, basis=basis, observable=A)


def operator_function(basis: SpectralBasis, fn) -> np.ndarray:
    """sum_i fn_i |b_i><b_i|."""
    values = fn.values if isinstance(fn, SpectrumFunction) else np.asarray(fn, dtype=np.complex128)
    if values.shape[0] != basis.dim:
        raise DimensionMismatch(f"function has {values.shape[0]} values, basis has {basis.dim} eigenvalues")
    V = basis.eigenvectors
    return (V * values) @ V.conj().T


def optimal_proxy(profile: WeakValueProfile) -> SpectrumFunction:
    return profile.real


def optimal_commutant(profile: WeakValueProfile, psi=None, floor: float = QUANTUM_FLOOR) -> SpectrumFunction:
    """Im A_w normalized to unit seminorm on the state.

    Raises NoQuantumComponent when ||Im A_w(B)|| <= ``floor``.
    """
    state = profile.state if psi is None else psi
    im = profile.imag
    norm = seminorm(operator_function(profile.basis, im), state)
    if norm <= floor:
        raise NoQuantumComponent(f"||Im A_w(B)|| = {norm:.3g}: A commutes with B on this state")
    return im.scaled(1.0 / norm)


def approximation_error(A, fn: SpectrumFunction, basis: SpectralBasis, psi) -> float:
    """||A - f(B)|| for a real function f."""
    A = as_matrix(A)
    if not isinstance(fn, SpectrumFunction):
        fn = SpectrumFunction(fn)
    fn.require_real()
    if A.shape[0] != basis.dim:
        raise DimensionMismatch(f"A is {A.shape[0]}-dimensional, basis is {basis.dim}-dimensional")
    return seminorm(A - operator_function(basis, SpectrumFunction(fn.real)), psi)


@dataclass(frozen=True)
class IdentityReport:
    residual_action: float
    residual_mean_re: float
    residual_mean_im: float
    residual_norm_split: float
    residual_pythagoras: float
    residual_distance: float
    residual_orthogonality: float = 0.0
    residual_correlation: float = 0.0

    def max_residual(self) -> float:
        return max(self.as_dict().values())

    def as_dict(self) -> dict[str, float]:
        return dict(self.__dict__)


def verify_weak_identities(A, basis: SpectralBasis, psi, fn: SpectrumFunction | None = None,
                           profile: WeakValueProfile | None = None) -> IdentityReport:
    """Residuals of the exact weak-value identities on one instance.

    ``fn`` is the real comparison function for the Pythagorean, orthogonality
    and correlation checks; it defaults to the constant <A>.  Every quantity is
    recomputed from the operator matrices so the residuals compare two
    genuinely different evaluation paths.
    """
    A = require_hermitian(A, name="A")
    state = psi if isinstance(psi, PureState) else PureState(psi)
    v = state.amplitudes
    if profile is None:
        profile = weak_value_profile(A, basis, state)
    if fn is None:
        fn = SpectrumFunction.constant(expectation(A, state).real, basis.dim)
    f = operator_function(basis, SpectrumFunction(fn.require_real()))

    Aw = operator_function(basis, SpectrumFunction(profile.values))
    re = operator_function(basis, profile.real)
    im = operator_function(basis, profile.imag)

    mean_a = expectation(A, state).real
    norm_a = seminorm(A, state)
    norm_re = seminorm(re, state)
    norm_im = seminorm(im, state)
    dist_opt = seminorm(A - re, state)
    dist_f = seminorm(A - f, state)
    gap = seminorm(re - f, state)

    # Re <(A - Re A_w(B)) (Re A_w(B) - f(B))> with both factors Hermitian
    ortho = np.vdot((A - re) @ v, (re - f) @ v).real
    corr = np.vdot(v, f @ A @ v) - np.vdot(v, f @ Aw @ v)

    return IdentityReport(
        residual_action=float(np.linalg.norm(A @ v - Aw @ v)),
        residual_mean_re=abs(mean_a - expectation(re, state).real),
        residual_mean_im=abs(expectation(im, state)),
        residual_norm_split=abs(norm_a ** 2 - norm_re ** 2 - norm_im ** 2),
        residual_pythagoras=abs(dist_f ** 2 - dist_opt ** 2 - gap ** 2),
        residual_distance=abs(dist_opt - norm_im),
        residual_orthogonality=abs(float(ortho)),
        residual_correlation=float(abs(corr)),
    )
