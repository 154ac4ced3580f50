"""Seeded property harness over random instances.

Every property is expressed as a non-negative violation (0 when it holds
exactly) with its own tolerance.  ``run_random_verify`` aggregates the maximum
violation per property over all accepted instances.  Instance k of dimension d
draws from its own stream seeded by (seed, d, k), so results do not depend on
evaluation order.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import DegenerateSpectrum, NoQuantumComponent, VanishingFisher, ZeroOverlap
from .estimation import (
    EstimationSetup,
    admissible_perturbation,
    cramer_rao_report,
    fisher_information,
    local_unbiasedness_check,
    optimal_estimator,
    profile_at,
    time_energy_report,
    evolve,
)
from .inequalities import (
    covariance_inequality,
    equality_diagnostics,
    general_inequality,
    optimal_inequality,
    rk_inequality,
    schroedinger_inequality,
)
from .quantum import PhysicsConfig
from .sampling import instance_rng, random_hermitian, random_real_function, random_state
from .weakval import (
    SpectralBasis,
    SpectrumFunction,
    approximation_error,
    optimal_commutant,
    spectral_basis,
    verify_weak_identities,
    weak_value_profile,
)

SUITES = ("identities", "inequalities", "optimality", "estimation")
MAX_REDRAWS = 50

# property -> (suite, default tolerance)
PROPERTIES = {
    "identity_action": ("identities", 1e-9),
    "identity_mean_re": ("identities", 1e-9),
    "identity_mean_im": ("identities", 1e-9),
    "identity_norm_split": ("identities", 1e-9),
    "identity_pythagoras": ("identities", 1e-9),
    "identity_orthogonality": ("identities", 1e-9),
    "identity_correlation": ("identities", 1e-9),
    "identity_distance": ("identities", 1e-9),
    "phase_invariance": ("identities", 1e-12),
    "ineq_robertson_kennard": ("inequalities", 1e-10),
    "ineq_general": ("inequalities", 1e-10),
    "ineq_general_optimal": ("inequalities", 1e-10),
    "ineq_optimal": ("inequalities", 1e-10),
    "ineq_covariance": ("inequalities", 1e-10),
    "ineq_schroedinger": ("inequalities", 1e-10),
    "hierarchy_optimal_vs_rk": ("inequalities", 1e-10),
    "complementarity": ("inequalities", 1e-9),
    "covariance_identity": ("inequalities", 1e-10),
    "equality_triangle": ("inequalities", 1e-10),
    "scale_covariance": ("inequalities", 1e-10),
    "d2_saturation": ("inequalities", 1e-9),
    "optimality_perturbation": ("optimality", 1e-12),
    "fisher_vs_finite_difference": ("estimation", 1e-5),
    "cramer_rao_saturation": ("estimation", 1e-8),
    "cramer_rao_perturbed": ("estimation", 1e-9),
    "time_energy_saturation": ("estimation", 1e-8),
    "estimator_unbiasedness": ("estimation", 1e-6),
    "reduction_chain": ("estimation", 1e-9),
}


@dataclass(frozen=True)
class RandomVerifyConfig:
    dims: tuple[int, ...] = (2, 4, 8)
    trials_per_dim: int = 100
    seed: int = 0
    perturbations: int = 100
    suites: tuple[str, ...] = SUITES
    tolerances: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.trials_per_dim < 1:
            raise ValueError("trials_per_dim must be at least 1")
        if any(d < 2 for d in self.dims):
            raise ValueError("every dimension must be at least 2")
        unknown = set(self.suites) - set(SUITES)
        if unknown:
            raise ValueError(f"unknown suites {sorted(unknown)}")

    def tolerance(self, prop: str) -> float:
        return self.tolerances.get(prop, PROPERTIES[prop][1])


@dataclass
class Instance:
    A: np.ndarray
    B: np.ndarray
    psi: object
    basis: SpectralBasis
    rejections: int


def draw_instance(rng: np.random.Generator, dim: int) -> Instance:
    """Draw (A, B, psi), redrawing while B is degenerate or psi misses an eigenvector."""
    rejections = 0
    for _ in range(MAX_REDRAWS):
        A = random_hermitian(rng, dim)
        B = random_hermitian(rng, dim)
        psi = random_state(rng, dim)
        try:
            basis = spectral_basis(B)
            weak_value_profile(A, basis, psi)
        except (DegenerateSpectrum, ZeroOverlap):
            rejections += 1
            continue
        return Instance(A, B, psi, basis, rejections)
    raise RuntimeError(f"no acceptable instance after {MAX_REDRAWS} draws at d={dim}")


def _neg(report) -> float:
    return max(0.0, -report.slack / (1.0 + report.lhs))


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1e-300) if (a or b) else 0.0


def check_identities(inst: Instance, rng: np.random.Generator) -> dict[str, float]:
    d = inst.basis.dim
    f = SpectrumFunction(random_real_function(rng, d, scale=rng.uniform(0.1, 3.0)))
    profile = weak_value_profile(inst.A, inst.basis, inst.psi)
    rep = verify_weak_identities(inst.A, inst.basis, inst.psi, f, profile=profile)
    out = {f"identity_{k.removeprefix('residual_')}": v for k, v in rep.as_dict().items()}
    phases = np.exp(1j * rng.uniform(0, 2 * np.pi, d))
    rotated = SpectralBasis(inst.basis.eigenvalues, inst.basis.eigenvectors * phases, inst.basis.observable)
    other = weak_value_profile(inst.A, rotated, inst.psi)
    out["phase_invariance"] = float(np.max(np.abs(other.values - profile.values)) / (1 + np.max(np.abs(profile.values))))
    return out


def check_inequalities(inst: Instance, rng: np.random.Generator) -> tuple[dict[str, float], dict[str, bool]]:
    A, basis, psi = inst.A, inst.basis, inst.psi
    d = basis.dim
    profile = weak_value_profile(A, basis, psi)
    f = SpectrumFunction(random_real_function(rng, d, scale=rng.uniform(0.1, 3.0)))
    g = SpectrumFunction(random_real_function(rng, d, scale=rng.uniform(0.1, 3.0)))
    rk = rk_inequality(A, inst.B, psi)
    gen = general_inequality(A, basis, f, g, psi)
    opt = optimal_inequality(A, basis, psi, profile=profile)
    cov = covariance_inequality(A, basis, psi, profile=profile)
    sch = schroedinger_inequality(A, inst.B, psi)
    diag = equality_diagnostics(A, basis, psi, profile=profile)
    out = {
        "ineq_robertson_kennard": _neg(rk),
        "ineq_general": _neg(gen),
        "ineq_optimal": _neg(opt),
        "ineq_covariance": _neg(cov),
        "ineq_schroedinger": _neg(sch),
        "hierarchy_optimal_vs_rk": max(0.0, opt.lhs - rk.lhs),
        "complementarity": abs(opt.lhs ** 2 + cov.lhs ** 2 - sch.lhs) / (1.0 + sch.lhs),
        "covariance_identity": cov.details["cov_identity_residual"],
        "equality_triangle": max(0.0, diag.residual_beta - diag.residual_im - diag.residual_re),
    }
    try:
        gbar = optimal_commutant(profile)
        best = general_inequality(A, basis, profile.real, gbar, psi)
        # at (f_opt, gbar_opt) both sides meet
        out["ineq_general_optimal"] = max(_neg(best), abs(best.slack) / (1.0 + best.lhs))
    except NoQuantumComponent:
        out["ineq_general_optimal"] = 0.0

    c = float(rng.uniform(0.1, 10.0))
    scaled = [rk_inequality(c * A, inst.B, psi), optimal_inequality(c * A, basis, psi),
              covariance_inequality(c * A, basis, psi), schroedinger_inequality(c * A, inst.B, psi)]
    powers = [1, 1, 1, 2]
    worst = 0.0
    for base, new, k in zip((rk, opt, cov, sch), scaled, powers):
        worst = max(worst, abs(new.lhs - c ** k * base.lhs) / (1.0 + c ** k * base.lhs),
                    abs(new.rhs - c ** k * base.rhs) / (1.0 + c ** k * base.rhs))
    out["scale_covariance"] = worst

    saturated = {}
    if d == 2:
        out["d2_saturation"] = max(abs(r.slack) / (1.0 + r.lhs) for r in (opt, cov, sch))
        saturated = {"optimal": opt.saturated, "covariance": cov.saturated, "schroedinger": sch.saturated}
    return out, saturated


def check_optimality(inst: Instance, rng: np.random.Generator, perturbations: int) -> dict[str, float]:
    profile = weak_value_profile(inst.A, inst.basis, inst.psi)
    f_opt = profile.values.real
    best = approximation_error(inst.A, SpectrumFunction(f_opt), inst.basis, inst.psi)
    worst = 0.0
    for _ in range(perturbations):
        scale = 10.0 ** rng.uniform(-3.0, 0.0)
        delta = scale * rng.normal(size=f_opt.shape[0])
        err = approximation_error(inst.A, SpectrumFunction(f_opt + delta), inst.basis, inst.psi)
        worst = max(worst, best - err)
    return {"optimality_perturbation": worst}


def check_estimation(inst: Instance, rng: np.random.Generator) -> dict[str, float]:
    hbar = float(rng.uniform(0.5, 2.0))
    t0 = float(rng.uniform(-1.0, 1.0))
    setup = EstimationSetup(inst.A, inst.psi, t0, PhysicsConfig(hbar))
    basis = inst.basis
    out = {}
    fr = fisher_information(setup, basis, t0)
    out["fisher_vs_finite_difference"] = abs(fr.fisher - fr.fisher_fd) / (1.0 + fr.fisher)
    if fr.fisher <= 1e-6:
        return out
    g = optimal_estimator(setup, basis)
    cr = cramer_rao_report(g, setup, basis)
    out["cramer_rao_saturation"] = abs(cr.lhs * fr.fisher - 1.0)
    check = local_unbiasedness_check(g, setup, basis)
    out["estimator_unbiasedness"] = max(check.mean_residual, check.slope_residual,
                                        check.conjugacy_residual, check.identity_residual)
    f_opt = profile_at(setup, basis, t0).real
    te = time_energy_report(setup, basis, f_opt, g)
    out["time_energy_saturation"] = abs(te.lhs / te.rhs - 1.0)

    # general inequality at f_opt with g -> g - <g> reproduces Cramer-Rao after rescaling
    psi0 = evolve(setup, t0)
    gen = general_inequality(setup.generator, basis, f_opt, g.shifted(-cr.details["mean"]), psi0)
    k = fr.fisher * hbar ** 2 / 4.0
    out["reduction_chain"] = max(_rel(cr.lhs * k, gen.lhs ** 2), _rel(cr.rhs * k, gen.rhs ** 2))

    x = admissible_perturbation(rng.normal(size=basis.dim), setup, basis)
    perturbed = cramer_rao_report(SpectrumFunction(g.real + x.real), setup, basis)
    out["cramer_rao_perturbed"] = max(0.0, (perturbed.rhs - perturbed.lhs) * fr.fisher)
    return out


@dataclass
class _Acc:
    worst: dict = field(default_factory=dict)
    where: dict = field(default_factory=dict)

    def add(self, values: dict[str, float], tag: str) -> None:
        for k, v in values.items():
            if k not in self.worst or v > self.worst[k]:
                self.worst[k] = float(v)
                self.where[k] = tag


def run_random_verify(config: RandomVerifyConfig) -> dict:
    acc = _Acc()
    accepted: dict[str, int] = {}
    rejections: dict[str, int] = {}
    skipped_estimation = 0
    sat_counts = {"optimal": 0, "covariance": 0, "schroedinger": 0}
    d2_total = 0
    for d in config.dims:
        accepted[str(d)] = 0
        rejections[str(d)] = 0
        for k in range(config.trials_per_dim):
            rng = instance_rng(config.seed, d, k)
            inst = draw_instance(rng, d)
            rejections[str(d)] += inst.rejections
            accepted[str(d)] += 1
            tag = f"d={d},trial={k}"
            if "identities" in config.suites:
                acc.add(check_identities(inst, rng), tag)
            if "inequalities" in config.suites:
                values, sat = check_inequalities(inst, rng)
                acc.add(values, tag)
                if sat:
                    d2_total += 1
                    for name, flag in sat.items():
                        sat_counts[name] += int(flag)
            if "optimality" in config.suites:
                acc.add(check_optimality(inst, rng, config.perturbations), tag)
            if "estimation" in config.suites:
                try:
                    acc.add(check_estimation(inst, rng), tag)
                except (ZeroOverlap, VanishingFisher):
                    skipped_estimation += 1

    properties = {}
    for name, (suite, _) in PROPERTIES.items():
        if name not in acc.worst:
            continue
        tol = config.tolerance(name)
        worst = acc.worst[name]
        properties[name] = {"suite": suite, "max_violation": worst, "tolerance": tol,
                            "pass": worst <= tol, "worst_instance": acc.where[name]}
    summary = {
        "config": {"dims": list(config.dims), "trials_per_dim": config.trials_per_dim,
                   "seed": config.seed, "perturbations": config.perturbations,
                   "suites": list(config.suites)},
        "accepted": accepted,
        "rejections": rejections,
        "properties": properties,
    }
    if "estimation" in config.suites:
        summary["estimation_skipped"] = skipped_estimation
    all_pass = all(p["pass"] for p in properties.values())
    if d2_total:
        rates = {k: v / d2_total for k, v in sat_counts.items()}
        summary["d2_saturation_rate"] = rates
        all_pass = all_pass and all(r == 1.0 for r in rates.values())
    summary["pass"] = all_pass
    return summary
