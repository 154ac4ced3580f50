"""Problem files: JSON with dim, A, B, psi and optional hbar, t0.

Complex numbers are ``[re, im]`` pairs and matrices are row-major lists of
rows::

    {"dim": 2, "hbar": 1.0, "t0": 0.0,
     "A": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]],
     "B": [[[1, 0], [0, 0]], [[0, 0], [-1, 0]]],
     "psi": [[0.7071067811865476, 0], [0, 0.7071067811865476]]}
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import ParseError, ValidationError
from .linops import HERMITIAN_TOL, check_hermitian
from .quantum import NORM_TOL, PhysicsConfig, PureState


@dataclass(frozen=True, eq=False)
class ProblemFile:
    dim: int
    A: np.ndarray
    B: np.ndarray
    psi: PureState
    hbar: float = 1.0
    t0: float = 0.0

    @property
    def config(self) -> PhysicsConfig:
        return PhysicsConfig(self.hbar)

    def with_overrides(self, hbar: float | None = None, t0: float | None = None) -> "ProblemFile":
        return ProblemFile(self.dim, self.A, self.B, self.psi,
                           self.hbar if hbar is None else hbar,
                           self.t0 if t0 is None else t0)

    def scaled(self, c: float) -> "ProblemFile":
        return ProblemFile(self.dim, c * self.A, self.B, self.psi, self.hbar, self.t0)

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "hbar": self.hbar,
            "t0": self.t0,
            "A": encode_matrix(self.A),
            "B": encode_matrix(self.B),
            "psi": encode_vector(self.psi.amplitudes),
        }


def encode_vector(v) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(v, dtype=np.complex128)]


def encode_matrix(M) -> list:
    return [encode_vector(row) for row in np.asarray(M, dtype=np.complex128)]


def _real(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(path, f"expected a number, got {type(value).__name__}")
    if not math.isfinite(value):
        raise ValidationError(path, "must be finite")
    return float(value)


def _complex(value, path: str) -> complex:
    if not isinstance(value, list) or len(value) != 2:
        raise ValidationError(path, "expected a complex number as [re, im]")
    return complex(_real(value[0], f"{path}[0]"), _real(value[1], f"{path}[1]"))


def _vector(value, dim: int, path: str) -> np.ndarray:
    if not isinstance(value, list):
        raise ValidationError(path, "expected a list")
    if len(value) != dim:
        raise ValidationError(path, f"expected {dim} entries, got {len(value)}")
    return np.array([_complex(z, f"{path}[{i}]") for i, z in enumerate(value)], dtype=np.complex128)


def _matrix(value, dim: int, path: str) -> np.ndarray:
    if not isinstance(value, list):
        raise ValidationError(path, "expected a list of rows")
    if len(value) != dim:
        raise ValidationError(path, f"expected {dim} rows, got {len(value)}")
    return np.array([_vector(row, dim, f"{path}[{i}]") for i, row in enumerate(value)])


def parse_problem(data: bytes | str, hermitian_tol: float = HERMITIAN_TOL,
                  norm_tol: float = NORM_TOL) -> ProblemFile:
    """Parse and validate a problem file.

    Raises ParseError for undecodable input and ValidationError naming the
    first offending field otherwise.
    """
    try:
        text = data.decode("utf-8") if isinstance(data, (bytes, bytearray)) else data
        doc = json.loads(text)
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ParseError(f"not a valid UTF-8 JSON document: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")

    for key in ("dim", "A", "B", "psi"):
        if key not in doc:
            raise ValidationError(key, "missing required field")
    unknown = set(doc) - {"dim", "hbar", "t0", "A", "B", "psi"}
    if unknown:
        raise ValidationError(sorted(unknown)[0], "unknown field")

    dim = doc["dim"]
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 2:
        raise ValidationError("dim", "must be an integer >= 2")
    hbar = _real(doc.get("hbar", 1.0), "hbar")
    if hbar <= 0:
        raise ValidationError("hbar", "must be positive")
    t0 = _real(doc.get("t0", 0.0), "t0")

    mats = {}
    for key in ("A", "B"):
        M = _matrix(doc[key], dim, key)
        asym = check_hermitian(M).max_asymmetry
        if asym > hermitian_tol:
            raise ValidationError(key, f"not Hermitian (max |M - M^dagger| = {asym:.3g})")
        mats[key] = M
    psi = _vector(doc["psi"], dim, "psi")
    norm = float(np.linalg.norm(psi))
    if abs(norm - 1.0) > norm_tol:
        raise ValidationError("psi", f"not normalized (norm {norm!r})")
    return ProblemFile(dim=dim, A=mats["A"], B=mats["B"], psi=PureState(psi, norm_tol), hbar=hbar, t0=t0)


def load_problem(path: str) -> ProblemFile:
    with open(path, "rb") as fh:
        return parse_problem(fh.read())


def dump_problem(problem: ProblemFile) -> str:
    return json.dumps(problem.to_dict(), indent=2)
