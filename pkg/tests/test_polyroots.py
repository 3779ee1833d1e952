import numpy as np
import pytest

from qcrobust.polyroots import ZeroPolynomialError, real_roots_in_open_interval


def test_simple_quadratics():
    assert real_roots_in_open_interval([-0.25, 0.0, 1.0]) == pytest.approx([-0.5, 0.5], abs=1e-12)
    assert real_roots_in_open_interval([1.0, 0.0, 1.0]) == []
    assert real_roots_in_open_interval([3.0]) == []


def test_planted_roots_and_outside_root():
    coeffs = np.polynomial.polynomial.polyfromroots([-0.7, 0.1, 0.9, 1.5])
    roots = real_roots_in_open_interval(list(coeffs))
    assert roots == pytest.approx([-0.7, 0.1, 0.9], abs=1e-10)


def test_repeated_root_reported_once():
    coeffs = np.polynomial.polynomial.polyfromroots([0.5, 0.5, -0.25])
    assert real_roots_in_open_interval(list(coeffs)) == pytest.approx([-0.25, 0.5], abs=1e-9)


def test_endpoint_roots_excluded():
    coeffs = np.polynomial.polynomial.polyfromroots([-1.0, 1.0])
    assert real_roots_in_open_interval(list(coeffs)) == []


def test_zero_polynomial():
    with pytest.raises(ZeroPolynomialError):
        real_roots_in_open_interval([0.0, 0.0])


def test_random_against_numpy():
    rng = np.random.default_rng(3)
    for _ in range(30):
        roots = np.sort(rng.uniform(-0.95, 0.95, size=rng.integers(1, 6)))
        if np.min(np.diff(roots), initial=1) < 1e-3:
            continue
        coeffs = np.polynomial.polynomial.polyfromroots(roots) * rng.uniform(0.5, 3)
        assert real_roots_in_open_interval(list(coeffs)) == pytest.approx(list(roots), abs=1e-8)
