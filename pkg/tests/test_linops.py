import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, strategies as st

from wvuncertainty import (
    NonHermitianInput,
    PAULI_X,
    PAULI_Z,
    check_hermitian,
    eigh,
    generator_exponential,
)
from wvuncertainty.errors import ConvergenceFailure, DimensionMismatch
from wvuncertainty.sampling import instance_rng, random_hermitian


def test_check_hermitian_examples():
    assert check_hermitian(np.eye(2)).max_asymmetry == 0
    assert check_hermitian(PAULI_X).max_asymmetry == 0
    report = check_hermitian([[0, 1j], [1j, 0]])
    assert report.max_asymmetry == pytest.approx(2.0)
    assert not report.is_hermitian(1e-10)


def test_check_hermitian_rejects_non_square():
    with pytest.raises(DimensionMismatch):
        check_hermitian(np.ones((2, 3)))


def test_eigh_identity():
    system = eigh(np.eye(3))
    np.testing.assert_array_equal(system.eigenvalues, [1, 1, 1])
    np.testing.assert_allclose(system.eigenvectors.conj().T @ system.eigenvectors, np.eye(3), atol=1e-15)


def test_eigh_pauli_x():
    system = eigh(PAULI_X)
    np.testing.assert_allclose(system.eigenvalues, [-1, 1], atol=1e-15)
    s = 1 / np.sqrt(2)
    # first component made real positive
    np.testing.assert_allclose(system.eigenvectors, [[s, s], [-s, s]], atol=1e-15)


def test_eigh_rejects_non_hermitian():
    with pytest.raises(NonHermitianInput):
        eigh([[0, 1j], [1j, 0]])


def test_eigh_sweep_budget():
    M = random_hermitian(np.random.default_rng(0), 8)
    with pytest.raises(ConvergenceFailure):
        eigh(M, max_sweeps=1)


def test_eigh_random_d8_residual(rng):
    M = random_hermitian(rng, 8)
    system = eigh(M)
    V, w = system.eigenvectors, system.eigenvalues
    assert np.max(np.abs(M @ V - V * w)) <= 1e-10
    np.testing.assert_allclose(w, np.linalg.eigvalsh(M), atol=1e-12)


@given(seed=st.integers(0, 2**32 - 1), d=st.integers(2, 16))
def test_eigh_invariants(seed, d):
    M = random_hermitian(instance_rng(seed, d), d, scale=10.0 ** instance_rng(seed).uniform(-3, 3))
    system = eigh(M)
    V = system.eigenvectors
    scale = 1 + np.max(np.abs(M))
    assert np.max(np.abs(M - system.reconstruct())) <= 1e-10 * scale
    assert np.max(np.abs(V.conj().T @ V - np.eye(d))) <= 1e-10
    assert np.all(np.diff(system.eigenvalues) >= 0)
    # phase convention
    for k in range(d):
        lead = V[np.flatnonzero(np.abs(V[:, k]) > 1e-8)[0], k]
        assert lead.imag == pytest.approx(0, abs=1e-15) and lead.real > 0


def test_eigh_handles_degenerate_spectrum(rng):
    Q, _ = np.linalg.qr(rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5)))
    M = (Q * np.array([1.0, 1.0, 2.0, 2.0, 2.0])) @ Q.conj().T
    M = 0.5 * (M + M.conj().T)
    system = eigh(M)
    np.testing.assert_allclose(system.eigenvalues, [1, 1, 2, 2, 2], atol=1e-12)
    assert np.max(np.abs(M - system.reconstruct())) <= 1e-10


def test_eigh_deterministic(rng):
    M = random_hermitian(rng, 9)
    a, b = eigh(M), eigh(M.copy())
    assert a.eigenvalues.tobytes() == b.eigenvalues.tobytes()
    assert a.eigenvectors.tobytes() == b.eigenvectors.tobytes()


def test_generator_exponential_zero():
    np.testing.assert_allclose(generator_exponential(PAULI_X, 0.0), np.eye(2), atol=1e-15)


def test_generator_exponential_sigma_z():
    np.testing.assert_allclose(generator_exponential(PAULI_Z, np.pi / 2), np.diag([-1j, 1j]), atol=1e-15)


@given(seed=st.integers(0, 2**32 - 1), d=st.integers(2, 12), s=st.floats(-20, 20))
def test_generator_exponential_against_expm(seed, d, s):
    A = random_hermitian(instance_rng(seed, d), d)
    U = generator_exponential(A, s)
    assert np.max(np.abs(U.conj().T @ U - np.eye(d))) <= 1e-10
    np.testing.assert_allclose(U, scipy.linalg.expm(-1j * s * A), atol=1e-9)


@given(seed=st.integers(0, 2**32 - 1), d=st.integers(2, 10),
       s1=st.floats(-5, 5), s2=st.floats(-5, 5))
def test_generator_exponential_group_law(seed, d, s1, s2):
    A = random_hermitian(instance_rng(seed, d), d)
    lhs = generator_exponential(A, s1) @ generator_exponential(A, s2)
    assert np.max(np.abs(lhs - generator_exponential(A, s1 + s2))) <= 1e-9
