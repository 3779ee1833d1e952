import math

import numpy as np
import pytest

from qcrobust.circuit import Circuit, rotation_gate


def random_hermitian(rng, n, norm=None):
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    h = 0.5 * (m + m.conj().T)
    if norm is not None:
        h *= norm / np.linalg.norm(h, 2)
    return h


def random_circuit(rng, n, gates, max_norm=3.0):
    return Circuit.from_hamiltonians(
        [random_hermitian(rng, n, rng.uniform(0.1, max_norm)) for _ in range(gates)]
    )


def commuting_family(rng, n, gates, max_norm=3.0):
    q, _ = np.linalg.qr(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
    hams = []
    for _ in range(gates):
        d = rng.uniform(-max_norm, max_norm, size=n)
        hams.append(q @ np.diag(d) @ q.conj().T)
    return Circuit.from_hamiltonians(hams)


@pytest.fixture
def example1():
    return Circuit((rotation_gate("rz", math.pi / 4), rotation_gate("ry", math.pi / 2)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
