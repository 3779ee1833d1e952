import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from conftest import random_hermitian
from qcrobust.matcore import (
    ConvergenceError,
    MatrixError,
    ad_exp_series,
    ad_power,
    as_hermitian,
    as_unitary,
    commutator,
    conjugate,
    herm_eig,
    spectral_norm,
    unitary_exp,
)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 7, 8, 9, 16, 40])
def test_eigenvalues_match_lapack(rng, n):
    h = random_hermitian(rng, n)
    eig = herm_eig(h)
    np.testing.assert_allclose(eig.values, np.sort(np.linalg.eigvalsh(h))[::-1], atol=1e-11)
    assert np.all(np.diff(eig.values) <= 0)
    np.testing.assert_allclose(eig.reconstruct(), h, atol=1e-11)
    v = eig.vectors
    np.testing.assert_allclose(v.conj().T @ v, np.eye(n), atol=1e-12)


def test_eig_degenerate_and_zero():
    z = herm_eig(np.zeros((3, 3)))
    assert np.all(z.values == 0)
    eig = herm_eig(np.diag([2.0, 2.0, -1.0]).astype(complex))
    np.testing.assert_allclose(eig.values, [2, 2, -1])


def test_eig_sweep_cap():
    h = random_hermitian(np.random.default_rng(1), 6)
    with pytest.raises(ConvergenceError):
        herm_eig(h, max_sweeps=1)


def test_validation_errors():
    with pytest.raises(MatrixError):
        as_hermitian([[0, 1], [2, 0]])
    with pytest.raises(MatrixError):
        as_hermitian([[1, 2, 3]])
    with pytest.raises(MatrixError):
        as_hermitian([[np.nan, 0], [0, 1]])
    with pytest.raises(MatrixError):
        as_unitary([[2, 0], [0, 1]])
    h = as_hermitian([[1, 1j], [-1j, 0]])
    assert not h.flags.writeable


@pytest.mark.parametrize("n", [2, 4, 10])
def test_spectral_norm_against_svd(rng, n):
    for _ in range(5):
        a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        assert spectral_norm(a) == pytest.approx(np.linalg.svd(a, compute_uv=False)[0], rel=1e-12)
        h = random_hermitian(rng, n)
        assert spectral_norm(h) == pytest.approx(np.max(np.abs(np.linalg.eigvalsh(h))), rel=1e-12)
        assert spectral_norm(1j * h) == pytest.approx(spectral_norm(h), rel=1e-12)


def test_unitary_exp_against_expm(rng):
    for n in (1, 2, 4, 9):
        h = random_hermitian(rng, n, 3.0)
        u = unitary_exp(h, 0.7)
        np.testing.assert_allclose(u, expm(-0.7j * h), atol=1e-12)
        np.testing.assert_allclose(u @ u.conj().T, np.eye(n), atol=1e-12)


def test_commutator_identities(rng):
    a, b = random_hermitian(rng, 3), random_hermitian(rng, 3)
    np.testing.assert_allclose(commutator(a, b), -commutator(b, a))
    np.testing.assert_allclose(ad_power(a, b, 0), b)
    np.testing.assert_allclose(ad_power(a, b, 2), commutator(a, commutator(a, b)), atol=1e-13)
    assert spectral_norm(commutator(a, a)) == 0.0
    with pytest.raises(ValueError):
        ad_power(a, b, -1)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), t=st.floats(-2, 2))
def test_hadamard_series_matches_conjugation(seed, t):
    rng = np.random.default_rng(seed)
    a, b = random_hermitian(rng, 3, 2.0), random_hermitian(rng, 3)
    lhs = ad_exp_series(a, b, -1j * t)
    rhs = conjugate(unitary_exp(a, t), b)
    assert spectral_norm(lhs - rhs) <= 1e-10
    assert spectral_norm(rhs) == pytest.approx(spectral_norm(b), rel=1e-10)
