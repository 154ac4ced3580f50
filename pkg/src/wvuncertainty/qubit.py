"""Bloch-sphere sweep of the A = sigma_x, B = sigma_z example.

For psi = (cos(theta/2), e^{i phi} sin(theta/2)) the closed forms are

    ||Re A_w(B) - <A>|| = |cos(theta) cos(phi)|,   ||B - <B>|| = |sin(theta)|,

and every row compares them with the matrix computation, alongside both
sides of the Robertson-Kennard and optimal-proxy inequalities.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .inequalities import optimal_inequality, rk_inequality
from .quantum import PAULI_X, PAULI_Z, bloch_state, moments, seminorm
from .weakval import operator_function, spectral_basis, weak_value_profile

COLUMNS = (
    "theta", "phi",
    "re_dev_norm", "re_dev_formula",
    "sigma_b", "sigma_b_formula",
    "rk_lhs", "rk_rhs",
    "opt_lhs", "opt_rhs",
    "tighter", "reason",
)
NUMERIC = COLUMNS[2:10]
ANGLE_TOL = 1e-12
TIGHTER_TOL = 1e-9


@dataclass(frozen=True)
class QubitSweepConfig:
    theta_steps: int = 25
    phi_steps: int = 25
    includes_endpoints: bool = True

    def __post_init__(self):
        if self.theta_steps < 2 or self.phi_steps < 2:
            raise ValueError("theta_steps and phi_steps must be at least 2")

    def grid(self) -> tuple[np.ndarray, np.ndarray]:
        if self.includes_endpoints:
            return (np.linspace(0.0, np.pi, self.theta_steps),
                    np.linspace(0.0, 2 * np.pi, self.phi_steps))
        return ((np.arange(self.theta_steps) + 0.5) * np.pi / self.theta_steps,
                (np.arange(self.phi_steps) + 0.5) * 2 * np.pi / self.phi_steps)


def _near(x: float, targets) -> bool:
    return any(abs(x - t) <= ANGLE_TOL for t in targets)


def exclusion_reason(theta: float, phi: float) -> str:
    if _near(theta, (0.0, np.pi)):
        return "zero_overlap"
    if _near(phi, (np.pi / 2, 3 * np.pi / 2)):
        return "re_weak_value_constant"
    return ""


def sweep_rows(config: QubitSweepConfig) -> list[dict]:
    """One dict per grid point, theta-major.

    Rows at theta in {0, pi} have no weak value (an eigenstate of sigma_z has
    zero overlap with the other eigenvector) and carry only the angles and the
    reason.  Rows at phi in {pi/2, 3pi/2} are computed but marked excluded:
    Re A_w(B) is the constant <A> = 0 there, so the optimal bound coincides
    with Robertson-Kennard by construction.
    """
    basis = spectral_basis(PAULI_Z)
    eye = np.eye(2)
    thetas, phis = config.grid()
    rows = []
    for theta in thetas:
        for phi in phis:
            reason = exclusion_reason(theta, phi)
            row = {"theta": float(theta), "phi": float(phi), "reason": reason, "tighter": None}
            if reason == "zero_overlap":
                row.update({k: None for k in NUMERIC})
                rows.append(row)
                continue
            psi = bloch_state(theta, phi)
            profile = weak_value_profile(PAULI_X, basis, psi)
            m = moments(PAULI_X, PAULI_Z, psi)
            rk = rk_inequality(PAULI_X, PAULI_Z, psi)
            opt = optimal_inequality(PAULI_X, basis, psi, profile=profile)
            row.update(
                re_dev_norm=seminorm(operator_function(basis, profile.real) - m.mean_a * eye, psi),
                re_dev_formula=abs(np.cos(theta) * np.cos(phi)),
                sigma_b=m.sigma_b,
                sigma_b_formula=abs(np.sin(theta)),
                rk_lhs=rk.lhs,
                rk_rhs=rk.rhs,
                opt_lhs=opt.lhs,
                opt_rhs=opt.rhs,
                tighter=bool(rk.lhs - opt.lhs > TIGHTER_TOL * (1.0 + rk.lhs)),
            )
            rows.append(row)
    return rows


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, str):
        return value
    return f"{float(value):.17g}"


def rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for row in rows:
        writer.writerow([_fmt(row[c]) for c in COLUMNS])
    return buf.getvalue()


def parse_csv(text: str) -> list[dict]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if tuple(header) != COLUMNS:
        raise ValueError(f"unexpected header {header}")
    rows = []
    for record in reader:
        row = {}
        for name, cell in zip(COLUMNS, record):
            if name == "reason":
                row[name] = cell
            elif name == "tighter":
                row[name] = None if cell == "" else cell == "true"
            else:
                row[name] = None if cell == "" else float(cell)
        rows.append(row)
    return rows
