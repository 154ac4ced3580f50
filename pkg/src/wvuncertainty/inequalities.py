"""Uncertainty inequalities with both sides reported explicitly.

Each evaluator returns an :class:`InequalityReport` carrying ``lhs``, ``rhs``
and the slack ``lhs - rhs``.  The inequalities covered:

* ``rk``: sigma(A) sigma(B) >= |<[A,B]>|/2
* ``general``: ||A - f(B)|| ||g(B)|| >= |<[A,g(B)]>|/2 for real f, g
* ``optimal``: ||A - Re A_w(B)|| sigma(B) >= |<[A,B]>|/2
* ``covariance``: ||Re A_w(B) - <A>|| sigma(B) >= |Cov[A,B]|
* ``schroedinger``: Var[A] Var[B] >= |<[A,B]>/2|^2 + Cov[A,B]^2
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateVariance, InternalConsistencyError
from .linops import as_matrix, require_hermitian
from .quantum import PureState, as_state, centered, expectation, moments, seminorm
from .weakval import (
    SpectralBasis,
    SpectrumFunction,
    WeakValueProfile,
    approximation_error,
    as_basis,
    operator_function,
    weak_value_profile,
)

SAT_TOL = 1e-8
HOLD_TOL = 1e-10
VARIANCE_FLOOR = 1e-12


@dataclass(frozen=True)
class InequalityReport:
    name: str
    lhs: float
    rhs: float
    sat_tol: float = SAT_TOL
    details: dict = field(default_factory=dict)

    @property
    def slack(self) -> float:
        return self.lhs - self.rhs

    @property
    def saturated(self) -> bool:
        return abs(self.slack) <= self.sat_tol * (1.0 + self.lhs)

    def holds(self, tol: float = HOLD_TOL) -> bool:
        return self.slack >= -tol * (1.0 + self.lhs)

    def as_dict(self) -> dict:
        out = {"name": self.name, "lhs": self.lhs, "rhs": self.rhs, "slack": self.slack,
               "saturated": self.saturated, "holds": self.holds()}
        if self.details:
            out["details"] = dict(self.details)
        return out


def _profile(A, B, psi) -> WeakValueProfile:
    return weak_value_profile(A, as_basis(B), psi)


def general_inequality(A, B, f: SpectrumFunction, g: SpectrumFunction, psi,
                       sat_tol: float = SAT_TOL) -> InequalityReport:
    """||A - f(B)|| * ||g(B)|| versus |<[A, g(B)]>|/2.

    ``B`` may be a matrix or an already computed :class:`SpectralBasis`.
    """
    A = require_hermitian(A, name="A")
    basis = as_basis(B)
    g_op = operator_function(basis, SpectrumFunction(g.require_real()))
    lhs = approximation_error(A, f, basis, psi) * seminorm(g_op, psi)
    rhs = 0.5 * abs(expectation(A @ g_op - g_op @ A, psi))
    return InequalityReport("general", lhs, rhs, sat_tol)


def rk_inequality(A, B, psi, sat_tol: float = SAT_TOL) -> InequalityReport:
    m = moments(A, B, psi)
    return InequalityReport("robertson_kennard", m.sigma_a * m.sigma_b, abs(m.commutator_half), sat_tol)


def optimal_inequality(A, B, psi, profile: WeakValueProfile | None = None,
                       sat_tol: float = SAT_TOL) -> InequalityReport:
    """The Robertson-Kennard bound with <A> replaced by the optimal proxy Re A_w(B)."""
    A = require_hermitian(A, name="A")
    if profile is None:
        profile = _profile(A, B, psi)
    basis = profile.basis
    m = moments(A, basis.observable, psi)
    error = approximation_error(A, profile.real, basis, psi)
    return InequalityReport(
        "optimal", error * m.sigma_b, abs(m.commutator_half), sat_tol,
        details={"approximation_error": error, "imag_norm": profile.imag_norm(),
                 "sigma_b": m.sigma_b, "rk_lhs": m.sigma_a * m.sigma_b},
    )


def covariance_inequality(A, B, psi, profile: WeakValueProfile | None = None,
                          sat_tol: float = SAT_TOL) -> InequalityReport:
    A = require_hermitian(A, name="A")
    if profile is None:
        profile = _profile(A, B, psi)
    basis = profile.basis
    Bm = basis.observable
    m = moments(A, Bm, psi)
    re_dev = operator_function(basis, profile.real) - m.mean_a * np.eye(basis.dim)
    lhs = seminorm(re_dev, psi) * m.sigma_b

    # Cov[Re A_w(B), B] through the outcome distribution: both are functions of B
    p = profile.probabilities
    b = basis.eigenvalues
    re = profile.values.real
    cov_classical = float(np.sum(p * re * b) - np.sum(p * re) * np.sum(p * b))
    residual = abs(cov_classical - m.cov)
    bound = HOLD_TOL * (1.0 + float(np.max(np.abs(A))) * (1.0 + float(np.max(np.abs(Bm)))))
    if residual > bound:
        raise InternalConsistencyError(f"Cov[A,B] and Cov[Re A_w(B), B] differ by {residual:.3g}")
    return InequalityReport(
        "covariance", lhs, abs(m.cov), sat_tol,
        details={"cov": m.cov, "cov_re_weak_value": cov_classical, "cov_identity_residual": residual},
    )


def schroedinger_inequality(A, B, psi, sat_tol: float = SAT_TOL) -> InequalityReport:
    m = moments(A, B, psi)
    rhs = abs(m.commutator_half) ** 2 + m.cov ** 2
    return InequalityReport("schroedinger", m.var_a * m.var_b, rhs, sat_tol,
                            details={"commutator_term": abs(m.commutator_half) ** 2,
                                     "covariance_term": m.cov ** 2})


@dataclass(frozen=True)
class EqualityDiagnostics:
    lam: float
    mu: float
    residual_im: float
    residual_re: float
    residual_beta: float

    @property
    def beta(self) -> complex:
        return complex(self.mu, self.lam)

    def as_dict(self) -> dict:
        return {"lambda": self.lam, "mu": self.mu, "beta": [self.mu, self.lam],
                "residual_im": self.residual_im, "residual_re": self.residual_re,
                "residual_beta": self.residual_beta}


def equality_diagnostics(A, B, psi, profile: WeakValueProfile | None = None,
                         variance_floor: float = VARIANCE_FLOOR) -> EqualityDiagnostics:
    """Least-squares fit of the equality conditions of the optimal and covariance bounds.

    lambda fits Im A_w(B)|psi> ~ lambda (B - <B>)|psi>, mu fits
    (Re A_w(B) - <A>)|psi> ~ mu (B - <B>)|psi>, and the combined condition
    (A - <A>)|psi> ~ (mu + i lambda)(B - <B>)|psi> is checked with the same
    coefficients.  Residuals are Euclidean norms of the fitted differences.
    """
    A = require_hermitian(A, name="A")
    if profile is None:
        profile = _profile(A, B, psi)
    basis = profile.basis
    state = as_state(psi)
    v = state.amplitudes
    m = moments(A, basis.observable, state)
    if m.var_b <= variance_floor:
        raise DegenerateVariance(f"Var[B] = {m.var_b:.3g} is too small to fit the equality conditions")

    db = centered(basis.observable, state) @ v
    im = operator_function(basis, profile.imag) @ v
    re_dev = operator_function(basis, profile.real) @ v - m.mean_a * v
    lam = float(np.vdot(db, im).real / m.var_b)
    mu = m.cov / m.var_b
    beta = complex(mu, lam)
    da = A @ v - m.mean_a * v
    return EqualityDiagnostics(
        lam=lam,
        mu=mu,
        residual_im=float(np.linalg.norm(im - lam * db)),
        residual_re=float(np.linalg.norm(re_dev - mu * db)),
        residual_beta=float(np.linalg.norm(da - beta * db)),
    )
