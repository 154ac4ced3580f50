import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from wvuncertainty.errors import ParseError, ValidationError
from wvuncertainty.problem import ProblemFile, dump_problem, load_problem, parse_problem
from wvuncertainty.quantum import PAULI_X, PAULI_Z, PureState
from wvuncertainty.sampling import instance_rng, random_hermitian, random_state


def doc(**over):
    base = {
        "dim": 2,
        "A": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]],
        "B": [[[1, 0], [0, 0]], [[0, 0], [-1, 0]]],
        "psi": [[2 ** -0.5, 0], [0, 2 ** -0.5]],
    }
    base.update(over)
    return json.dumps({k: v for k, v in base.items() if v is not None})


def test_defaults():
    p = parse_problem(doc())
    assert p.hbar == 1.0 and p.t0 == 0.0 and p.dim == 2
    np.testing.assert_array_equal(p.A, PAULI_X)
    np.testing.assert_array_equal(p.B, PAULI_Z)


def test_bytes_and_overrides():
    p = parse_problem(doc(hbar=2.0, t0=0.5).encode())
    assert (p.hbar, p.t0) == (2.0, 0.5)
    q = p.with_overrides(t0=1.0)
    assert (q.hbar, q.t0) == (2.0, 1.0)


@pytest.mark.parametrize(
    "over, field",
    [
        ({"psi": [[0.5, 0], [0, 0]]}, "psi"),
        ({"A": [[[0, 0], [1, 0]], [[0, 0], [0, 0]]]}, "A"),
        ({"B": [[[0, 0], [0, 1]], [[0, 0], [0, 0]]]}, "B"),
        ({"dim": 1}, "dim"),
        ({"dim": 3}, "A"),
        ({"hbar": -1.0}, "hbar"),
        ({"hbar": "one"}, "hbar"),
        ({"psi": None}, "psi"),
        ({"extra": 1}, "extra"),
        ({"psi": [[1, 0], [0]]}, "psi[1]"),
    ],
)
def test_validation_names_field(over, field):
    with pytest.raises(ValidationError) as info:
        parse_problem(doc(**over))
    assert info.value.field == field


@pytest.mark.parametrize("data", [b"\xff\xfe", "{not json", "[1, 2]"])
def test_parse_errors(data):
    with pytest.raises(ParseError):
        parse_problem(data)


@given(seed=st.integers(0, 2**32 - 1), d=st.integers(2, 6))
def test_dump_round_trip(seed, d):
    rng = instance_rng(seed)
    p = ProblemFile(d, random_hermitian(rng, d), random_hermitian(rng, d), random_state(rng, d),
                    hbar=float(rng.uniform(0.1, 3)), t0=float(rng.normal()))
    q = parse_problem(dump_problem(p))
    np.testing.assert_array_equal(q.A, p.A)
    np.testing.assert_array_equal(q.B, p.B)
    np.testing.assert_array_equal(q.psi.amplitudes, p.psi.amplitudes)
    assert (q.hbar, q.t0) == (p.hbar, p.t0)


def test_load_from_disk(tmp_path):
    path = tmp_path / "p.json"
    path.write_text(doc())
    assert load_problem(str(path)).dim == 2


def test_scaled():
    p = ProblemFile(2, PAULI_X, PAULI_Z, PureState([1, 0]))
    np.testing.assert_array_equal(p.scaled(3.0).A, 3.0 * PAULI_X)
