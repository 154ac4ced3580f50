"""Command line interface.

    wvu report PROBLEM.json            all inequalities, identities and diagnostics
    wvu estimate PROBLEM.json          optimal estimator plus Monte Carlo check
    wvu qubit-sweep                    Bloch-sphere table for sigma_x / sigma_z
    wvu random-verify                  seeded property sweep

Exit codes: 0 success, 1 parse/validation failure, 2 property violation,
3 degenerate input (DegenerateSpectrum, ZeroOverlap, VanishingFisher).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from .errors import (
    DegenerateInput,
    DegenerateSpectrum,
    DegenerateVariance,
    NoQuantumComponent,
    ParseError,
    ValidationError,
    VanishingFisher,
    ZeroOverlap,
)
from .estimation import (
    EstimationSetup,
    cramer_rao_report,
    fisher_information,
    full_fisher_report,
    monte_carlo_estimate,
    profile_at,
    time_energy_report,
)
from .inequalities import (
    HOLD_TOL,
    covariance_inequality,
    equality_diagnostics,
    general_inequality,
    optimal_inequality,
    rk_inequality,
    schroedinger_inequality,
)
from .problem import ProblemFile, load_problem
from .quantum import moments
from .qubit import QubitSweepConfig, rows_to_csv, sweep_rows
from .verify import PROPERTIES, RandomVerifyConfig, run_random_verify
from .weakval import (
    SpectrumFunction,
    approximation_error,
    optimal_commutant,
    spectral_basis,
    verify_weak_identities,
    weak_value_profile,
)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_VIOLATION = 2
EXIT_DEGENERATE = 3


def jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [jsonable(obj.real), jsonable(obj.imag)]
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    return obj


def _note(notes: list, exc: Exception) -> None:
    notes.append({"name": type(exc).__name__, "message": str(exc)})


def cmd_report(problem: ProblemFile, tol: float = HOLD_TOL) -> tuple[dict, int]:
    """Every inequality, identity and diagnostic for one problem instance."""
    A, B, psi = problem.A, problem.B, problem.psi
    notes: list[dict] = []
    m = moments(A, B, psi)
    reports = {
        "robertson_kennard": rk_inequality(A, B, psi),
        "schroedinger": schroedinger_inequality(A, B, psi),
    }
    doc = {
        "problem": {"dim": problem.dim, "hbar": problem.hbar, "t0": problem.t0},
        "moments": dict(m.__dict__),
    }
    try:
        basis = spectral_basis(B)
        profile = weak_value_profile(A, basis, psi)
    except (DegenerateSpectrum, ZeroOverlap) as exc:
        _note(notes, exc)
        doc["inequalities"] = {k: r.as_dict() for k, r in reports.items()}
        doc["notes"] = notes
        doc["status"] = "degenerate_input"
        doc["all_inequalities_hold"] = all(r.holds(tol) for r in reports.values())
        return jsonable(doc), EXIT_DEGENERATE

    d = problem.dim
    f_opt = profile.real
    centered_b = SpectrumFunction(basis.eigenvalues - m.mean_b)
    reports["general_rk_choice"] = general_inequality(
        A, basis, SpectrumFunction.constant(m.mean_a, d), centered_b, psi)
    reports["optimal"] = optimal_inequality(A, basis, psi, profile=profile)
    reports["covariance"] = covariance_inequality(A, basis, psi, profile=profile)
    try:
        gbar = optimal_commutant(profile)
        reports["general_optimal"] = general_inequality(A, basis, f_opt, gbar, psi)
    except NoQuantumComponent as exc:
        _note(notes, exc)

    doc["weak_values"] = {"eigenvalues": basis.eigenvalues, "values": profile.values,
                          "probabilities": profile.probabilities}
    doc["approximation"] = {
        "error_optimal": approximation_error(A, f_opt, basis, psi),
        "error_mean": approximation_error(A, SpectrumFunction.constant(m.mean_a, d), basis, psi),
        "imag_norm": profile.imag_norm(),
        "optimal_proxy": f_opt.real,
    }
    doc["identities"] = verify_weak_identities(A, basis, psi, profile=profile).as_dict()
    try:
        doc["equality_diagnostics"] = equality_diagnostics(A, basis, psi, profile=profile).as_dict()
    except DegenerateVariance as exc:
        _note(notes, exc)

    estimation = {}
    setup = EstimationSetup(A, psi, problem.t0, problem.config)
    try:
        # keep the bare Fisher entry when the estimator cannot be built (I = 0)
        estimation["fisher"] = fisher_information(setup, basis).as_dict()
        full = full_fisher_report(setup, basis)
        estimation["fisher"] = full.as_dict()
        g = full.estimator
        reports["cramer_rao"] = cramer_rao_report(g, setup, basis)
        reports["time_energy"] = time_energy_report(setup, basis, profile_at(setup, basis, problem.t0).real, g)
    except (VanishingFisher, ZeroOverlap) as exc:
        _note(notes, exc)
    doc["estimation"] = estimation

    doc["inequalities"] = {k: r.as_dict() for k, r in reports.items()}
    doc["notes"] = notes
    holds = all(r.holds(tol) for r in reports.values())
    doc["all_inequalities_hold"] = holds
    doc["status"] = "ok" if holds else "violation"
    return jsonable(doc), EXIT_OK if holds else EXIT_VIOLATION


def cmd_qubit_sweep(config: QubitSweepConfig) -> list[dict]:
    return sweep_rows(config)


def cmd_random_verify(config: RandomVerifyConfig) -> tuple[dict, int]:
    summary = run_random_verify(config)
    return jsonable(summary), EXIT_OK if summary["pass"] else EXIT_VIOLATION


def cmd_estimate(problem: ProblemFile, n: int, seed: int, workers: int = 1) -> tuple[dict, int]:
    """Optimal estimator at t0, its bounds, and a seeded Monte Carlo run."""
    setup = EstimationSetup(problem.A, problem.psi, problem.t0, problem.config)
    doc = {"problem": {"dim": problem.dim, "hbar": problem.hbar, "t0": problem.t0}, "notes": []}
    try:
        basis = spectral_basis(problem.B)
        fr = full_fisher_report(setup, basis)
    except DegenerateInput as exc:
        _note(doc["notes"], exc)
        doc["status"] = "degenerate_input"
        return jsonable(doc), EXIT_DEGENERATE
    g = fr.estimator
    cr = cramer_rao_report(g, setup, basis)
    te = time_energy_report(setup, basis, profile_at(setup, basis, problem.t0).real, g)
    mc = monte_carlo_estimate(setup, basis, g, n, seed, workers=workers)
    bound = 1.0 / fr.fisher
    doc["fisher"] = fr.as_dict()
    doc["cramer_rao"] = cr.as_dict()
    doc["time_energy"] = te.as_dict()
    doc["monte_carlo"] = mc.as_dict()
    doc["statistics"] = {
        "mean_deviation": abs(mc.empirical_mean - problem.t0),
        "mean_bound_5sigma": 5.0 * math.sqrt(bound / n),
        "variance_relative_error": abs(mc.empirical_variance - bound) / bound,
        "insufficient_samples": n < 2,
    }
    if n < 2:
        doc["notes"].append({"name": "InsufficientSamples",
                             "message": "a single draw has no sample variance; reported as 0"})
    holds = cr.holds() and te.holds()
    doc["status"] = "ok" if holds else "violation"
    return jsonable(doc), EXIT_OK if holds else EXIT_VIOLATION


def _flatten(obj, prefix: str = "") -> list[tuple[str, object]]:
    if isinstance(obj, dict):
        out = []
        for k, v in obj.items():
            out.extend(_flatten(v, f"{prefix}.{k}" if prefix else str(k)))
        return out
    if isinstance(obj, list) and any(isinstance(v, (dict, list)) for v in obj):
        out = []
        for i, v in enumerate(obj):
            out.extend(_flatten(v, f"{prefix}[{i}]"))
        return out
    return [(prefix, obj)]


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.17g}"
    if isinstance(value, list):
        return " ".join(_cell(v) for v in value)
    return str(value)


def render(doc, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["key", "value"])
    for key, value in _flatten(doc):
        writer.writerow([key, _cell(value)])
    return buf.getvalue()


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dims(text: str) -> tuple[int, ...]:
    try:
        dims = tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad --dims value {text!r}") from exc
    if not dims or any(d < 2 for d in dims):
        raise argparse.ArgumentTypeError("--dims needs integers >= 2")
    return dims


def _u64(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return value


class _Parser(argparse.ArgumentParser):
    # usage errors share the exit code of bad input; 2 is reserved for violations
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wvu", description="Weak-value uncertainty relations on finite-dimensional pure states.")
    sub = parser.add_subparsers(dest="command", required=True)

    def io_flags(p, default_fmt):
        p.add_argument("--format", choices=("json", "csv"), default=default_fmt)
        p.add_argument("--output", metavar="PATH")

    p = sub.add_parser("report", help="evaluate every inequality for a problem file")
    p.add_argument("problem")
    p.add_argument("--hbar", type=float)
    p.add_argument("--t0", type=float)
    p.add_argument("--tol", type=float, default=HOLD_TOL, help="allowed negative slack, relative to 1+lhs")
    io_flags(p, "json")

    p = sub.add_parser("estimate", help="optimal estimator and Monte Carlo validation")
    p.add_argument("problem")
    p.add_argument("--samples", type=int, default=100000)
    p.add_argument("--seed", type=_u64, default=0)
    p.add_argument("--hbar", type=float)
    p.add_argument("--t0", type=float)
    p.add_argument("--workers", type=int, default=1)
    io_flags(p, "json")

    p = sub.add_parser("qubit-sweep", help="Bloch-sphere table for A = sigma_x, B = sigma_z")
    p.add_argument("--theta-steps", type=int, default=25)
    p.add_argument("--phi-steps", type=int, default=25)
    p.add_argument("--no-endpoints", action="store_true", help="use cell midpoints instead of a closed grid")
    io_flags(p, "csv")

    p = sub.add_parser("random-verify", help="seeded property sweep over random instances")
    p.add_argument("--dims", type=_dims, default=(2, 4, 8))
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=_u64, default=0)
    p.add_argument("--perturbations", type=int, default=100)
    p.add_argument("--suites", default=",".join(("identities", "inequalities", "optimality", "estimation")))
    p.add_argument("--tol", type=float, help="override the tolerance of every identity and inequality property")
    io_flags(p, "json")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command in ("report", "estimate"):
            problem = load_problem(args.problem).with_overrides(args.hbar, args.t0)
            if args.hbar is not None and args.hbar <= 0:
                raise ValidationError("hbar", "must be positive")
            if args.command == "report":
                doc, code = cmd_report(problem, args.tol)
            else:
                if args.samples < 1:
                    raise ValidationError("samples", "must be at least 1")
                doc, code = cmd_estimate(problem, args.samples, args.seed, args.workers)
            _emit(render(doc, args.format), args.output)
            return code
        if args.command == "qubit-sweep":
            config = QubitSweepConfig(args.theta_steps, args.phi_steps, not args.no_endpoints)
            rows = cmd_qubit_sweep(config)
            text = rows_to_csv(rows) if args.format == "csv" else json.dumps(jsonable(rows), indent=2) + "\n"
            _emit(text, args.output)
            return EXIT_OK
        suites = tuple(s for s in args.suites.split(",") if s)
        overrides = {}
        if args.tol is not None:
            overrides = {k: args.tol for k, (suite, _) in PROPERTIES.items()
                         if suite in ("identities", "inequalities")}
        config = RandomVerifyConfig(dims=args.dims, trials_per_dim=args.trials, seed=args.seed,
                                    perturbations=args.perturbations, suites=suites, tolerances=overrides)
        doc, code = cmd_random_verify(config)
        _emit(render(doc, args.format), args.output)
        return code
    except (ParseError, ValidationError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
