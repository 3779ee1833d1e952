import numpy as np
import pytest

from conftest import random_circuit
from qcrobust.bounds import baseline_bound, theorem1_bound, theorem2_bound
from qcrobust.circuit import Mode
from qcrobust.verify import (
    VerificationConfig,
    appendix_a_check,
    appendix_b_check,
    counter_uniforms,
    hadamard_check,
    monte_carlo_check,
    ode_crosscheck,
    sample_perturbations,
)


def test_counter_stream_is_partition_invariant():
    whole = counter_uniforms(7, np.arange(100), 3)
    parts = np.vstack([counter_uniforms(7, np.arange(0, 37), 3), counter_uniforms(7, np.arange(37, 100), 3)])
    np.testing.assert_array_equal(whole, parts)
    assert whole.min() >= 0 and whole.max() < 1
    assert abs(whole.mean() - 0.5) < 0.05
    assert not np.array_equal(whole, counter_uniforms(8, np.arange(100), 3))


def test_samples_stay_in_cube():
    cfg = VerificationConfig(500, 1, 0.3, Mode.PER_GATE)
    eps = sample_perturbations(cfg, 4)
    assert eps.shape == (500, 4) and np.abs(eps).max() <= 0.3
    uni = sample_perturbations(VerificationConfig(50, 1, 0.3, Mode.UNIFORM), 4)
    assert np.all(uni == uni[:, :1])


def test_example1_no_violations(example1):
    cfg = VerificationConfig(10_000, 42, 0.2, Mode.PER_GATE)
    floors = {"baseline": baseline_bound(example1, 0.2).fidelity_floor, "thm2": theorem2_bound(example1, 0.2).fidelity_floor}
    rep = monte_carlo_check(example1, cfg, floors)
    assert rep.passed and rep.violations == 0
    assert rep.min_fidelity >= floors["thm2"]
    assert rep.appendix_residuals["appendix_a"] <= 1e-10
    assert rep.appendix_residuals["appendix_b_min_slack"] >= -1e-10


def test_injected_floor_is_caught(example1):
    rep = monte_carlo_check(example1, VerificationConfig(200, 1, 0.2), {"baseline": 1.0}, identity_draws=0)
    assert rep.violations == 200 and not rep.passed


def test_zero_eps_bar_gives_unit_fidelity(example1):
    rep = monte_carlo_check(example1, VerificationConfig(50, 1, 0.0), {"thm2": 1.0}, identity_draws=0)
    assert rep.min_fidelity == pytest.approx(1.0, abs=1e-14)
    assert rep.violations == 0


def test_uniform_floor_rejected_for_per_gate(example1):
    with pytest.raises(ValueError):
        monte_carlo_check(example1, VerificationConfig(10, 1, 0.1, Mode.PER_GATE), {"thm1": 0.5})


def test_uniform_mode_validates_thm1(rng):
    c = random_circuit(rng, 2, 3)
    cfg = VerificationConfig(2000, 5, 0.3, Mode.UNIFORM)
    rep = monte_carlo_check(c, cfg, {"thm1": theorem1_bound(c, 0.3).fidelity_floor}, identity_draws=0)
    assert rep.violations == 0
    assert len(rep.worst_sample) == 1


def test_identity_checks(rng):
    c = random_circuit(rng, 3, 3, 2.0)
    eps = [0.1, -0.2, 0.05]
    assert appendix_a_check(c, 0.6, eps) <= 1e-10
    assert appendix_b_check(c, 0.6, eps, eps_bar=0.2) >= -1e-10
    assert hadamard_check(c.hamiltonians[0], c.hamiltonians[1], -0.8) <= 1e-10
    with pytest.raises(ValueError):
        appendix_b_check(c, 0.6, eps, eps_bar=0.1)


def test_ode_matches_product(rng):
    c = random_circuit(rng, 2, 3, 2.0)
    assert ode_crosscheck(c, 0.3) <= 1e-6
    assert ode_crosscheck(c, 0.0) == 0.0
    with pytest.raises(ValueError):
        ode_crosscheck(c, 0.1, step=0)
