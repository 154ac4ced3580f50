"""Estimating the parameter of a unitary family from measurements of B.

The family is psi(t) = exp(-i t A / hbar) psi.  Measuring B gives outcome
probabilities p(b, t) = |<b|psi(t)>|^2 whose Fisher information is

    I(t) = (2/hbar)^2 ||Im A_w(B)||^2

with the weak value taken on psi(t).  The estimator

    g_opt(B) = 2/(hbar I(t0)) Im A_w(B) + t0

is locally unbiased at t0 and attains the Cramer-Rao bound 1/I(t0).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import NotLocallyUnbiased, VanishingFisher
from .inequalities import InequalityReport, SAT_TOL
from .linops import EigenSystem, eigh, generator_exponential, require_hermitian
from .quantum import PhysicsConfig, PureState, expectation, seminorm
from .weakval import (
    SpectralBasis,
    SpectrumFunction,
    WeakValueProfile,
    as_basis,
    operator_function,
    weak_value_profile,
)

FISHER_FLOOR = 1e-10
UNBIASED_TOL = 1e-6
MC_BLOCK = 1 << 16
GENERATOR_NAME = "numpy.PCG64"


def fd_step(t: float) -> float:
    return 1e-5 * (1.0 + abs(t))


@dataclass(frozen=True, eq=False)
class EstimationSetup:
    generator: np.ndarray
    base_state: PureState
    t0: float = 0.0
    config: PhysicsConfig = PhysicsConfig()

    def __post_init__(self):
        object.__setattr__(self, "generator", require_hermitian(self.generator, name="generator"))
        if not isinstance(self.base_state, PureState):
            object.__setattr__(self, "base_state", PureState(self.base_state))

    @property
    def hbar(self) -> float:
        return self.config.hbar

    @cached_property
    def eigensystem(self) -> EigenSystem:
        return eigh(self.generator)


@dataclass(frozen=True)
class OutcomeDistribution:
    probabilities: np.ndarray

    def cdf(self) -> np.ndarray:
        c = np.cumsum(self.probabilities)
        c[-1] = 1.0
        return c


@dataclass(frozen=True, eq=False)
class FisherReport:
    t: float
    fisher: float
    fisher_fd: float
    estimator: SpectrumFunction | None = None
    cr_bound: float | None = None
    variance_g: float | None = None
    unbiased_mean: float | None = None
    unbiased_slope: float | None = None

    def as_dict(self) -> dict:
        out = {"t": self.t, "fisher": self.fisher, "fisher_fd": self.fisher_fd,
               "fisher_residual": abs(self.fisher - self.fisher_fd)}
        if self.estimator is not None:
            out.update(estimator=self.estimator.real.tolist(), cr_bound=self.cr_bound,
                       variance_g=self.variance_g, unbiased_mean=self.unbiased_mean,
                       unbiased_slope=self.unbiased_slope)
        return out


@dataclass(frozen=True)
class MonteCarloResult:
    n_samples: int
    seed: int
    empirical_mean: float
    empirical_variance: float
    standard_error_mean: float
    generator: str = GENERATOR_NAME

    def as_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class UnbiasednessCheck:
    mean_residual: float
    slope_residual: float
    conjugacy_residual: float
    identity_residual: float

    def passes(self, tol: float = UNBIASED_TOL) -> bool:
        return max(self.mean_residual, self.slope_residual, self.conjugacy_residual) <= tol

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def evolve(setup: EstimationSetup, t: float) -> PureState:
    if t == 0:
        return setup.base_state
    U = generator_exponential(setup.generator, t / setup.hbar, system=setup.eigensystem)
    out = U @ setup.base_state.amplitudes
    # unitary evolution; the renormalization only strips accumulated round-off
    return PureState(out / np.linalg.norm(out))


def outcome_distribution(basis: SpectralBasis, psi) -> OutcomeDistribution:
    p = basis.probabilities(psi)
    return OutcomeDistribution(p / p.sum())


def profile_at(setup: EstimationSetup, B, t: float) -> WeakValueProfile:
    return weak_value_profile(setup.generator, as_basis(B), evolve(setup, t))


def fisher_from_profile(profile: WeakValueProfile, hbar: float) -> float:
    return (2.0 / hbar) ** 2 * profile.imag_norm() ** 2


def fisher_finite_difference(setup: EstimationSetup, basis: SpectralBasis, t: float) -> float:
    """sum_i (dp_i/dt)^2 / p_i with a central difference."""
    h = fd_step(t)
    p = basis.probabilities(evolve(setup, t))
    dp = (basis.probabilities(evolve(setup, t + h)) - basis.probabilities(evolve(setup, t - h))) / (2 * h)
    return float(np.sum(dp ** 2 / p))


def fisher_information(setup: EstimationSetup, B, t: float | None = None) -> FisherReport:
    t = setup.t0 if t is None else t
    basis = as_basis(B)
    profile = profile_at(setup, basis, t)
    return FisherReport(
        t=t,
        fisher=fisher_from_profile(profile, setup.hbar),
        fisher_fd=fisher_finite_difference(setup, basis, t),
    )


def optimal_estimator(setup: EstimationSetup, B, fisher_floor: float = FISHER_FLOOR) -> SpectrumFunction:
    basis = as_basis(B)
    profile = profile_at(setup, basis, setup.t0)
    fisher = fisher_from_profile(profile, setup.hbar)
    if fisher <= fisher_floor:
        raise VanishingFisher(f"I(t0) = {fisher:.3g}; the optimal estimator needs I(t0) > {fisher_floor:g}")
    return profile.imag.scaled(2.0 / (setup.hbar * fisher)).shifted(setup.t0)


def _mean_at(setup: EstimationSetup, g_op: np.ndarray, t: float) -> float:
    return expectation(g_op, evolve(setup, t)).real


def commutator_slope(g_op: np.ndarray, setup: EstimationSetup, psi) -> float:
    """d<g(B)>/dt from (i/hbar) <[A, g(B)]>."""
    A = setup.generator
    return float(((1j / setup.hbar) * expectation(A @ g_op - g_op @ A, psi)).real)


def local_unbiasedness_check(g: SpectrumFunction, setup: EstimationSetup, B) -> UnbiasednessCheck:
    basis = as_basis(B)
    g_op = operator_function(basis, SpectrumFunction(g.require_real()))
    t0 = setup.t0
    psi0 = evolve(setup, t0)
    h = fd_step(t0)
    slope_fd = (_mean_at(setup, g_op, t0 + h) - _mean_at(setup, g_op, t0 - h)) / (2 * h)
    slope_comm = commutator_slope(g_op, setup, psi0)
    A = setup.generator
    conj = expectation(g_op @ A - A @ g_op, psi0)
    return UnbiasednessCheck(
        mean_residual=abs(expectation(g_op, psi0).real - t0),
        slope_residual=abs(slope_fd - 1.0),
        conjugacy_residual=abs(conj - 1j * setup.hbar),
        identity_residual=abs(slope_fd - slope_comm),
    )


def admissible_perturbation(x, setup: EstimationSetup, B) -> SpectrumFunction:
    """Project real values ``x`` so that <x(B)> = 0 and d<x(B)>/dt = 0 at t0.

    Both constraints are linear in x with weights p_i and p_i Im A_w(b_i), so
    this is a Gram-Schmidt projection in the outcome-weighted inner product.
    Adding the result to a locally unbiased estimator keeps it locally unbiased.
    """
    basis = as_basis(B)
    profile = profile_at(setup, basis, setup.t0)
    p = profile.probabilities
    x = np.asarray(x, dtype=float).copy()
    directions = []
    for d in (np.ones(basis.dim), profile.values.imag.copy()):
        for e in directions:
            d = d - np.sum(p * d * e) * e
        n = np.sqrt(np.sum(p * d * d))
        if n > 0:
            directions.append(d / n)
    for e in directions:
        x = x - np.sum(p * x * e) * e
    return SpectrumFunction(x)


def cramer_rao_report(g: SpectrumFunction, setup: EstimationSetup, B, t: float | None = None,
                      fisher_floor: float = FISHER_FLOOR, sat_tol: float = SAT_TOL) -> InequalityReport:
    """Var[g(B)] against (d<g>/dt)^2 / I(t), slope from the commutator identity."""
    t = setup.t0 if t is None else t
    basis = as_basis(B)
    psi = evolve(setup, t)
    profile = weak_value_profile(setup.generator, basis, psi)
    fisher = fisher_from_profile(profile, setup.hbar)
    if fisher <= fisher_floor:
        raise VanishingFisher(f"I({t}) = {fisher:.3g} is below the floor {fisher_floor:g}")
    g_op = operator_function(basis, SpectrumFunction(g.require_real()))
    mean = expectation(g_op, psi).real
    var = seminorm(g_op - mean * np.eye(basis.dim), psi) ** 2
    slope = commutator_slope(g_op, setup, psi)
    return InequalityReport("cramer_rao", var, slope ** 2 / fisher, sat_tol,
                            details={"fisher": fisher, "slope": slope, "mean": mean, "t": t})


def time_energy_report(setup: EstimationSetup, B, f: SpectrumFunction, g: SpectrumFunction,
                       unbiased_tol: float = UNBIASED_TOL, sat_tol: float = SAT_TOL) -> InequalityReport:
    """||H - f(B)|| * ||t0 - g(B)|| against hbar/2 for a locally unbiased g."""
    basis = as_basis(B)
    check = local_unbiasedness_check(g, setup, basis)
    if not check.passes(unbiased_tol):
        raise NotLocallyUnbiased(
            f"estimator is not locally unbiased within {unbiased_tol:g}: {check.as_dict()}"
        )
    psi0 = evolve(setup, setup.t0)
    H = setup.generator
    energy = seminorm(H - operator_function(basis, SpectrumFunction(f.require_real())), psi0)
    timing = seminorm(operator_function(basis, SpectrumFunction(g.real - setup.t0)), psi0)
    return InequalityReport("time_energy", energy * timing, setup.hbar / 2, sat_tol,
                            details={"energy_error": energy, "time_error": timing,
                                     "unbiasedness": check.as_dict(), "unbiased_tol": unbiased_tol})


def _draw_block(cdf: np.ndarray, seed: int, start: int, count: int) -> np.ndarray:
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, start])))
    u = rng.random(count)
    return np.minimum(np.searchsorted(cdf, u, side="right"), cdf.shape[0] - 1)


def sample_outcomes(dist: OutcomeDistribution, n: int, seed: int, workers: int = 1,
                    block: int = MC_BLOCK) -> np.ndarray:
    """Indices of ``n`` outcomes drawn by inverse CDF.

    Block k of the index range uses its own PCG64 stream seeded by
    (seed, k * block), so the draw is identical for any ``workers``.
    """
    if n < 1:
        raise ValueError(f"need at least one sample, got {n}")
    cdf = dist.cdf()
    starts = list(range(0, n, block))
    jobs = [(s, min(block, n - s)) for s in starts]
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda j: _draw_block(cdf, seed, *j), jobs))
    else:
        parts = [_draw_block(cdf, seed, s, c) for s, c in jobs]
    return np.concatenate(parts)


def monte_carlo_estimate(setup: EstimationSetup, B, g: SpectrumFunction, n: int, seed: int,
                         workers: int = 1) -> MonteCarloResult:
    basis = as_basis(B)
    dist = outcome_distribution(basis, evolve(setup, setup.t0))
    idx = sample_outcomes(dist, n, seed, workers=workers)
    values = g.require_real()[idx]
    mean = float(np.mean(values))
    var = float(np.var(values, ddof=1)) if n > 1 else 0.0
    return MonteCarloResult(
        n_samples=n,
        seed=seed,
        empirical_mean=mean,
        empirical_variance=var,
        standard_error_mean=float(np.sqrt(var / n)),
    )


def full_fisher_report(setup: EstimationSetup, B, fisher_floor: float = FISHER_FLOOR) -> FisherReport:
    """Fisher information at t0 together with the optimal estimator and its statistics."""
    basis = as_basis(B)
    base = fisher_information(setup, basis, setup.t0)
    g = optimal_estimator(setup, basis, fisher_floor)
    check = local_unbiasedness_check(g, setup, basis)
    cr = cramer_rao_report(g, setup, basis, fisher_floor=fisher_floor)
    return FisherReport(
        t=base.t,
        fisher=base.fisher,
        fisher_fd=base.fisher_fd,
        estimator=g,
        cr_bound=1.0 / base.fisher,
        variance_g=cr.lhs,
        unbiased_mean=check.mean_residual,
        unbiased_slope=check.slope_residual,
    )
