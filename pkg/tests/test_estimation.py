import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, strategies as st

from wvuncertainty import (
    PAULI_X,
    PAULI_Z,
    EstimationSetup,
    PhysicsConfig,
    PureState,
    SpectrumFunction,
    VanishingFisher,
    cramer_rao_report,
    evolve,
    fisher_information,
    general_inequality,
    local_unbiasedness_check,
    monte_carlo_estimate,
    optimal_estimator,
    outcome_distribution,
    spectral_basis,
    time_energy_report,
)
from wvuncertainty.errors import NotLocallyUnbiased
from wvuncertainty.estimation import (
    OutcomeDistribution,
    admissible_perturbation,
    profile_at,
    sample_outcomes,
)
from wvuncertainty.quantum import bloch_state
from wvuncertainty.sampling import instance_rng, random_hermitian, random_state

from oracles import fisher_oracle


def random_setup(seed, d, hbar=1.0, t0=None):
    rng = instance_rng(seed, d)
    A, B, psi = random_hermitian(rng, d), random_hermitian(rng, d), random_state(rng, d)
    t0 = float(rng.uniform(-1, 1)) if t0 is None else t0
    return rng, EstimationSetup(A, psi, t0, PhysicsConfig(hbar)), spectral_basis(B)


def test_evolve_zero_time(reference_setup):
    np.testing.assert_array_equal(evolve(reference_setup, 0.0).amplitudes, reference_setup.base_state.amplitudes)


@pytest.mark.parametrize("t", [0.3, 1.0, -2.5])
def test_evolve_sigma_x_closed_form(t):
    setup = EstimationSetup(PAULI_X, PureState([1, 0]))
    np.testing.assert_allclose(evolve(setup, t).amplitudes, [np.cos(t), -1j * np.sin(t)], atol=1e-14)


@given(seed=st.integers(0, 2**32 - 1), t=st.floats(-50, 50))
def test_evolve_preserves_norm(seed, t):
    _, setup, _ = random_setup(seed, 5)
    U = scipy.linalg.expm(-1j * t * setup.generator)
    out = evolve(setup, t).amplitudes
    np.testing.assert_allclose(out, U @ setup.base_state.amplitudes, atol=1e-9)


def test_outcome_distribution_examples(rng):
    B = random_hermitian(rng, 4)
    basis = spectral_basis(B)
    p = outcome_distribution(basis, basis.eigenvectors[:, 2]).probabilities
    np.testing.assert_allclose(p, [0, 0, 1, 0], atol=1e-14)
    z = spectral_basis(PAULI_Z)
    assert outcome_distribution(z, bloch_state(0.7, 0.2)).probabilities[1] == pytest.approx(np.cos(0.35) ** 2)
    np.testing.assert_allclose(outcome_distribution(z, bloch_state(np.pi / 2, 1.0)).probabilities, [0.5, 0.5])


def test_fisher_reference(reference_setup):
    fr = fisher_information(reference_setup, PAULI_Z)
    assert fr.fisher == pytest.approx(4.0, abs=1e-9)
    assert fr.fisher_fd == pytest.approx(4.0, rel=1e-5)
    assert fisher_oracle(PAULI_X, PAULI_Z, reference_setup.base_state.amplitudes, 0.0, 1.0) == pytest.approx(4.0, rel=1e-5)


def test_fisher_hbar_scaling(reference_state):
    setup = EstimationSetup(PAULI_X, reference_state, 0.0, PhysicsConfig(2.0))
    fr = fisher_information(setup, PAULI_Z)
    assert fr.fisher == pytest.approx(1.0, abs=1e-12)
    assert fr.fisher_fd == pytest.approx(1.0, rel=1e-5)


def test_fisher_commuting_generator(reference_state):
    setup = EstimationSetup(PAULI_Z, reference_state)
    assert fisher_information(setup, PAULI_Z).fisher == 0.0
    with pytest.raises(VanishingFisher):
        optimal_estimator(setup, PAULI_Z)


@given(seed=st.integers(0, 2**32 - 1), d=st.integers(2, 8), hbar=st.floats(0.3, 3.0))
def test_fisher_against_independent_oracle(seed, d, hbar):
    _, setup, basis = random_setup(seed, d, hbar)
    fr = fisher_information(setup, basis)
    assert abs(fr.fisher - fr.fisher_fd) <= 1e-5 * (1 + fr.fisher)
    oracle = fisher_oracle(setup.generator, basis.observable, setup.base_state.amplitudes, setup.t0, hbar)
    assert fr.fisher == pytest.approx(oracle, rel=1e-4, abs=1e-8)


def test_optimal_estimator_reference(reference_setup):
    g = optimal_estimator(reference_setup, PAULI_Z)
    np.testing.assert_allclose(g.real, [-0.5, 0.5], atol=1e-12)
    cr = cramer_rao_report(g, reference_setup, PAULI_Z)
    assert cr.lhs == pytest.approx(0.25, abs=1e-12)
    assert cr.rhs == pytest.approx(0.25, abs=1e-12)
    assert cr.saturated


def test_optimal_estimator_shifted_t0(reference_state):
    setup = EstimationSetup(PAULI_X, reference_state, t0=0.7)
    g = optimal_estimator(setup, PAULI_Z)
    check = local_unbiasedness_check(g, setup, PAULI_Z)
    assert check.passes(1e-6)


def test_unbiasedness_of_constant(reference_setup):
    check = local_unbiasedness_check(SpectrumFunction.constant(0.0, 2), reference_setup, PAULI_Z)
    assert check.mean_residual == 0
    assert check.slope_residual == pytest.approx(1.0)
    assert not check.passes()


@given(seed=st.integers(0, 2**32 - 1), d=st.integers(2, 8), hbar=st.floats(0.3, 3.0))
def test_optimal_estimator_properties(seed, d, hbar):
    rng, setup, basis = random_setup(seed, d, hbar)
    g = optimal_estimator(setup, basis)
    check = local_unbiasedness_check(g, setup, basis)
    assert max(check.mean_residual, check.slope_residual, check.conjugacy_residual) <= 1e-6
    assert check.identity_residual <= 1e-5
    fr = fisher_information(setup, basis)
    cr = cramer_rao_report(g, setup, basis)
    assert cr.lhs * fr.fisher == pytest.approx(1.0, rel=1e-8)
    assert cr.saturated

    # admissible perturbations stay unbiased and strictly lose efficiency
    x = admissible_perturbation(rng.normal(size=d), setup, basis)
    perturbed = SpectrumFunction(g.real + x.real)
    assert local_unbiasedness_check(perturbed, setup, basis).passes(1e-6)
    rep = cramer_rao_report(perturbed, setup, basis)
    assert rep.slack >= -1e-9
    if d > 2:
        assert rep.lhs > 1 / fr.fisher

    # the general inequality at f_opt, g - <g> carries the same statement
    psi0 = evolve(setup, setup.t0)
    gen = general_inequality(setup.generator, basis, profile_at(setup, basis, setup.t0).real,
                             g.shifted(-cr.details["mean"]), psi0)
    k = fr.fisher * hbar ** 2 / 4
    assert cr.lhs * k == pytest.approx(gen.lhs ** 2, rel=1e-9)
    assert cr.rhs * k == pytest.approx(gen.rhs ** 2, rel=1e-9)


def test_cramer_rao_constant_estimator(reference_setup):
    rep = cramer_rao_report(SpectrumFunction.constant(3.0, 2), reference_setup, PAULI_Z)
    assert rep.lhs == pytest.approx(0.0, abs=1e-15)
    assert rep.rhs == pytest.approx(0.0, abs=1e-15)
    assert rep.holds()


def test_time_energy_reference(reference_setup):
    g = optimal_estimator(reference_setup, PAULI_Z)
    f = profile_at(reference_setup, spectral_basis(PAULI_Z), 0.0).real
    rep = time_energy_report(reference_setup, PAULI_Z, f, g)
    assert rep.details["energy_error"] == pytest.approx(1.0)
    assert rep.details["time_error"] == pytest.approx(0.5)
    assert rep.lhs == pytest.approx(0.5) and rep.rhs == 0.5 and rep.saturated


def test_time_energy_hbar_two(reference_state):
    setup = EstimationSetup(PAULI_X, reference_state, 0.0, PhysicsConfig(2.0))
    g = optimal_estimator(setup, PAULI_Z)
    f = profile_at(setup, spectral_basis(PAULI_Z), 0.0).real
    rep = time_energy_report(setup, PAULI_Z, f, g)
    assert rep.rhs == 1.0
    assert rep.lhs == pytest.approx(1.0, rel=1e-12)


def test_time_energy_requires_unbiased(reference_setup):
    with pytest.raises(NotLocallyUnbiased):
        time_energy_report(reference_setup, PAULI_Z, SpectrumFunction.constant(0.0, 2),
                           SpectrumFunction.constant(0.0, 2))


@given(seed=st.integers(0, 2**32 - 1), d=st.integers(2, 8))
def test_time_energy_random(seed, d):
    rng, setup, basis = random_setup(seed, d, float(instance_rng(seed).uniform(0.5, 2)))
    g = optimal_estimator(setup, basis)
    f_opt = profile_at(setup, basis, setup.t0).real
    best = time_energy_report(setup, basis, f_opt, g)
    assert best.lhs == pytest.approx(setup.hbar / 2, rel=1e-8)
    other = time_energy_report(setup, basis, SpectrumFunction(f_opt.real + rng.normal(size=d)), g)
    assert other.slack >= -1e-9


def test_monte_carlo_single_draw(reference_setup):
    g = optimal_estimator(reference_setup, PAULI_Z)
    res = monte_carlo_estimate(reference_setup, PAULI_Z, g, 1, seed=3)
    assert res.empirical_variance == 0.0
    assert min(abs(res.empirical_mean - v) for v in g.real) == 0.0


def test_monte_carlo_reference_statistics(reference_setup):
    g = optimal_estimator(reference_setup, PAULI_Z)
    n = 100_000
    for seed in (0, 1, 7, 2**63 + 5):
        res = monte_carlo_estimate(reference_setup, PAULI_Z, g, n, seed)
        assert abs(res.empirical_mean - 0.0) <= 5 * np.sqrt(0.25 / n)
        assert res.empirical_variance == pytest.approx(0.25, rel=0.03)


def test_monte_carlo_deterministic_and_worker_independent(reference_setup):
    g = optimal_estimator(reference_setup, PAULI_Z)
    a = monte_carlo_estimate(reference_setup, PAULI_Z, g, 200_001, seed=11)
    b = monte_carlo_estimate(reference_setup, PAULI_Z, g, 200_001, seed=11, workers=4)
    assert a == b


def test_sampling_follows_distribution():
    dist = OutcomeDistribution(np.array([0.1, 0.0, 0.6, 0.3]))
    idx = sample_outcomes(dist, 400_000, seed=5)
    freq = np.bincount(idx, minlength=4) / idx.size
    assert freq[1] == 0
    np.testing.assert_allclose(freq, dist.probabilities, atol=5 * np.sqrt(0.25 / idx.size))
    with pytest.raises(ValueError):
        sample_outcomes(dist, 0, seed=1)
