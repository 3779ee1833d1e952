import math

import numpy as np
import pytest
from scipy.linalg import expm

from conftest import random_circuit
from qcrobust.circuit import (
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    Circuit,
    Mode,
    PerturbationSpec,
    basis_state,
    conjugated_terms,
    effective_hamiltonian,
    effective_hamiltonian_multi,
    fidelity,
    ideal_state,
    perturbed_state,
    perturbed_states,
    rotation_gate,
)
from qcrobust.matcore import MatrixError


def _product(hams, scales, psi0):
    psi = psi0
    for h, s in zip(reversed(hams), reversed(scales)):
        psi = expm(-1j * s * h) @ psi
    return psi


def test_last_gate_acts_first(example1):
    # Ry(pi/2)|0> = (|0> + |1>)/sqrt2, then Rz(pi/4) adds phases
    psi = ideal_state(example1, basis_state(2))
    want = np.array([np.exp(-1j * math.pi / 8), np.exp(1j * math.pi / 8)]) / math.sqrt(2)
    np.testing.assert_allclose(psi, want, atol=1e-14)


def test_rotation_generators():
    g = rotation_gate("rz", 0.8)
    np.testing.assert_allclose(g.hamiltonian, 0.4 * PAULI_Z)
    np.testing.assert_allclose(g.unitary(), expm(-0.4j * PAULI_Z), atol=1e-14)
    with pytest.raises(ValueError):
        rotation_gate("rq", 1.0)


def test_states_against_expm(rng):
    for _ in range(10):
        c = random_circuit(rng, 3, 3)
        psi0 = basis_state(3, 1)
        eps = rng.uniform(-0.3, 0.3, size=3)
        got = perturbed_state(c, psi0, PerturbationSpec.per_gate(eps))
        np.testing.assert_allclose(got, _product(c.hamiltonians, 1 + eps, psi0), atol=1e-12)
        batch = perturbed_states(c, psi0, np.vstack([eps, np.zeros(3)]))
        np.testing.assert_allclose(batch[0], got, atol=1e-13)
        np.testing.assert_allclose(batch[1], ideal_state(c, psi0), atol=1e-13)


def test_perturbation_spec_validation():
    assert PerturbationSpec.uniform(0.1).mode is Mode.UNIFORM
    assert PerturbationSpec.uniform(0.1).per_gate_values(3) == (0.1, 0.1, 0.1)
    with pytest.raises(ValueError):
        PerturbationSpec.per_gate([0.1, 0.3], eps_bar=0.2)
    with pytest.raises(ValueError):
        PerturbationSpec.per_gate([0.1]).per_gate_values(2)


def test_fidelity_properties(rng):
    a = basis_state(2)
    assert fidelity(a, a) == 1.0
    assert fidelity(a, basis_state(2, 1)) == 0.0
    assert fidelity(a, 1j * a) == pytest.approx(1.0)
    with pytest.raises(MatrixError):
        fidelity(a, basis_state(3))


def test_dimension_mismatch_rejected():
    with pytest.raises(MatrixError):
        Circuit.from_hamiltonians([np.eye(2), np.eye(3)])


def test_conjugated_generator_example1(example1):
    tz, ty = math.pi / 4, math.pi / 2
    a1, a2 = conjugated_terms(example1)
    np.testing.assert_allclose(a1, tz / 2 * PAULI_Z, atol=1e-15)
    np.testing.assert_allclose(a2, ty / 2 * (math.cos(tz) * PAULI_Y - math.sin(tz) * PAULI_X), atol=1e-15)


def test_effective_hamiltonian_is_generator(rng):
    # i d/dt psi(t) = H(t) psi(t) checked by central differences
    c = random_circuit(rng, 2, 3)
    psi0 = basis_state(2)
    for t in (0.0, 0.25):
        h = 1e-5
        fwd = perturbed_state(c, psi0, PerturbationSpec.uniform(t + h, 1))
        bwd = perturbed_state(c, psi0, PerturbationSpec.uniform(t - h, 1))
        deriv = (fwd - bwd) / (2 * h)
        psi = perturbed_state(c, psi0, PerturbationSpec.uniform(t, 1))
        np.testing.assert_allclose(1j * deriv, effective_hamiltonian(c, t) @ psi, atol=1e-8)
    eps = [0.2, -0.1, 0.05]
    gen = effective_hamiltonian_multi(c, eps, 0.3)
    np.testing.assert_allclose(gen, gen.conj().T, atol=1e-14)
