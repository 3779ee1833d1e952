import math

import numpy as np
import pytest
from scipy.linalg import expm
from scipy.optimize import brentq

from conftest import commuting_family, random_circuit
from qcrobust.bounds import (
    Method,
    all_bounds,
    baseline_bound,
    epsilon_max,
    eta_table,
    is_commuting,
    series_value,
    theorem1_bound,
    theorem2_bound,
)
from qcrobust.circuit import PAULI_Z, Circuit
from qcrobust.h0solver import compute_h0

TZ, TY = math.pi / 4, math.pi / 2


def example1_series(eps):
    # eta_2p = theta_y theta_z^p / 2, summed in closed form
    x = TZ * eps
    return TY / 2 * (math.exp(x) - 1 - x) / x


def brute_eta(c, k, p):
    hs = c.hamiltonians
    total = 0.0
    for j in range(k - 1):
        inner = hs[k - 1]
        for i in range(k - 2, j, -1):
            u = expm(-1j * hs[i])
            inner = u @ inner @ u.conj().T
        m = inner
        for _ in range(p):
            m = hs[j] @ m - m @ hs[j]
        total += np.linalg.norm(m, 2)
    return total


def test_example1_goldens(example1):
    assert baseline_bound(example1, 0.2).fidelity_floor == pytest.approx(0.97224174, abs=1e-6)
    r = theorem2_bound(example1, 0.2)
    assert r.fidelity_floor == pytest.approx(0.9822095, abs=1e-5)
    assert r.tail_bound <= 1e-12 and r.converged
    assert r.h0 == pytest.approx(math.pi * math.sqrt(5) / 8, abs=1e-9)


def test_example1_eta_closed_form(example1):
    table = eta_table(example1, 0.2, order=8)
    for p in range(1, 9):
        assert table.eta(2, p) == pytest.approx(TY * TZ**p / 2, rel=1e-12)


def test_eta_against_brute_force(rng):
    c = random_circuit(rng, 3, 4, 1.5)
    table = eta_table(c, 0.1, order=5)
    for k in range(2, 5):
        for p in range(1, 6):
            assert table.eta(k, p) == pytest.approx(brute_eta(c, k, p), rel=1e-9, abs=1e-12)


def test_tail_bounds_discarded_terms(rng):
    c = random_circuit(rng, 2, 3, 2.0)
    eps = 0.3
    coarse = eta_table(c, eps, order=3)
    fine = eta_table(c, eps, order=40)
    assert fine.series() - coarse.series() <= coarse.tail_bound * (1 + 1e-12)
    assert coarse.tail_bound > fine.tail_bound


def test_zero_gate_floors_are_one():
    c = Circuit.from_hamiltonians([np.zeros((2, 2))])
    for r in all_bounds(c, 0.4).values():
        assert r.fidelity_floor == 1.0


def test_zero_eps_bar(example1):
    for r in all_bounds(example1, 0.0).values():
        assert r.m_value == 0.0


def test_theorem_ordering(rng):
    for _ in range(10):
        c = random_circuit(rng, 2, 3)
        t1 = theorem1_bound(c, 0.1)
        t2 = theorem2_bound(c, 0.1)
        assert t1.m_value <= t2.m_value + 1e-14


def test_commuting_family_has_no_series(rng):
    c = commuting_family(rng, 3, 3)
    assert is_commuting(c)
    table = eta_table(c, 0.5)
    assert table.entries.max() <= 1e-10
    # equality is attainable when all generators share a maximising eigenvector
    assert theorem2_bound(c, 0.5).m_value <= baseline_bound(c, 0.5).m_value * (1 + 1e-12)


def test_epsilon_max_example1(example1):
    h0 = compute_h0(example1)[0].value
    gap = example1.norm_sum - h0
    oracle = brentq(lambda e: example1_series(e) - gap, 1e-6, 5.0, xtol=1e-14)
    root = epsilon_max(example1)
    assert root == pytest.approx(oracle, abs=1e-9)
    assert abs(root - 0.759) <= 0.05


def test_epsilon_max_trivial_cases(rng):
    same = Circuit.from_hamiltonians([PAULI_Z, PAULI_Z])
    assert epsilon_max(same) == 0.0
    assert epsilon_max(commuting_family(rng, 2, 3)) is None


def test_series_value_consistency(example1):
    s, tail = series_value(example1, 0.2)
    assert s == pytest.approx(example1_series(0.2), abs=1e-11)
    assert s <= example1_series(0.2) <= s + tail + 1e-15


def test_invalid_arguments(example1):
    with pytest.raises(ValueError):
        baseline_bound(example1, -0.1)
    with pytest.raises(ValueError):
        eta_table(example1, 0.1, tol=0)
    with pytest.raises(ValueError):
        theorem2_bound(example1, 0.1, h0=-1.0)
    assert set(all_bounds(example1, 0.1, ["baseline"])) == {Method.BASELINE}
