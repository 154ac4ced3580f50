import numpy as np
import pytest

from wvuncertainty.verify import (
    PROPERTIES,
    SUITES,
    RandomVerifyConfig,
    check_estimation,
    check_identities,
    check_inequalities,
    check_optimality,
    draw_instance,
    run_random_verify,
)
from wvuncertainty.sampling import instance_rng


@pytest.fixture(scope="module")
def summary():
    return run_random_verify(RandomVerifyConfig(dims=(2, 3, 5), trials_per_dim=12, seed=9, perturbations=20))


def test_every_property_reported_and_passing(summary):
    assert set(summary["properties"]) == set(PROPERTIES)
    assert summary["pass"]
    for name, entry in summary["properties"].items():
        assert entry["max_violation"] <= entry["tolerance"], name
        assert entry["worst_instance"].startswith("d=")


def test_counts_and_saturation(summary):
    assert summary["accepted"] == {"2": 12, "3": 12, "5": 12}
    assert summary["d2_saturation_rate"] == {"optimal": 1.0, "covariance": 1.0, "schroedinger": 1.0}


def test_deterministic_and_order_independent():
    a = run_random_verify(RandomVerifyConfig(dims=(2, 4), trials_per_dim=5, seed=3, perturbations=5))
    b = run_random_verify(RandomVerifyConfig(dims=(4, 2), trials_per_dim=5, seed=3, perturbations=5))
    for name in a["properties"]:
        assert a["properties"][name]["max_violation"] == b["properties"][name]["max_violation"]


def test_suite_selection():
    s = run_random_verify(RandomVerifyConfig(dims=(3,), trials_per_dim=4, suites=("optimality",), perturbations=5))
    assert set(s["properties"]) == {"optimality_perturbation"}
    assert "d2_saturation_rate" not in s and "estimation_skipped" not in s


def test_tolerance_override_fails_run():
    s = run_random_verify(RandomVerifyConfig(dims=(3,), trials_per_dim=3, suites=("inequalities",),
                                             tolerances={"complementarity": -1.0}))
    assert not s["properties"]["complementarity"]["pass"] and not s["pass"]


@pytest.mark.parametrize("bad", [dict(trials_per_dim=0), dict(dims=(1,)), dict(suites=("nope",))])
def test_config_validation(bad):
    with pytest.raises(ValueError):
        RandomVerifyConfig(**bad)


def test_draw_instance_is_acceptable():
    inst = draw_instance(instance_rng(1, 6), 6)
    assert inst.basis.dim == 6
    assert np.all(np.diff(inst.basis.eigenvalues) > 0)


def test_check_functions_return_nonnegative_violations():
    rng = instance_rng(5, 4)
    inst = draw_instance(rng, 4)
    values = {**check_identities(inst, rng), **check_inequalities(inst, rng)[0],
              **check_optimality(inst, rng, 10), **check_estimation(inst, rng)}
    assert all(v >= 0 for v in values.values())
    assert {suite for suite, _ in (PROPERTIES[k] for k in values)} == set(SUITES)
