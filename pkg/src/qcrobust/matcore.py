"""Dense complex matrix kernels: Hermitian eigensolver, exponentials, norms, ad-calculus.

All functions take and return plain ``numpy`` arrays of dtype ``complex128``.
Arrays returned from the validating constructors (:func:`as_hermitian`,
:func:`as_unitary`) are marked read-only so they can be shared freely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

HERMITIAN_TOL = 1e-10
UNITARY_TOL = 1e-10
JACOBI_MAX_SWEEPS = 100
JACOBI_THRESHOLD = 1e-14

# relative asymmetry below which a product of Hermitian operands is treated as
# exactly (skew-)Hermitian by spectral_norm
_SYMMETRY_SLACK = 1e-13


class MatrixError(ValueError):
    """Invalid matrix input (shape, finiteness, symmetry)."""


class ConvergenceError(RuntimeError):
    """The Jacobi eigensolver hit its sweep cap."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def as_matrix(a) -> np.ndarray:
    """Validate a square, finite complex matrix and return it as ``complex128``."""
    m = np.array(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise MatrixError(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise MatrixError("matrix has non-finite entries")
    return m


def as_hermitian(a, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Check ``a`` is Hermitian to ``tol * max(1, ||a||)`` and return its symmetrized copy."""
    m = as_matrix(a)
    asym = spectral_norm(m - m.conj().T)
    scale = max(1.0, spectral_norm(m))
    if asym > tol * scale:
        raise MatrixError(f"matrix is not Hermitian: ||A - A^H||_2 = {asym:.3e}")
    return _frozen(0.5 * (m + m.conj().T))


def as_unitary(a, tol: float = UNITARY_TOL) -> np.ndarray:
    m = as_matrix(a)
    defect = spectral_norm(m.conj().T @ m - np.eye(m.shape[0]))
    if defect > tol:
        raise MatrixError(f"matrix is not unitary: ||U^H U - I||_2 = {defect:.3e}")
    return _frozen(m)


def _check_pair(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise MatrixError(f"dimension mismatch: {a.shape} vs {b.shape}")


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues (descending) and orthonormal eigenvector columns of a Hermitian matrix."""

    values: np.ndarray
    vectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ self.vectors.conj().T

    def exp(self, theta: float) -> np.ndarray:
        """``exp(-i theta H)`` from the stored spectrum."""
        phases = np.exp(-1j * theta * self.values)
        return (self.vectors * phases) @ self.vectors.conj().T


def _rotation(a_pq: complex, a_pp: float, a_qq: float) -> tuple[float, complex, complex]:
    # unitary [[c, s*ph], [-s*conj(ph), c]] on columns (p, q) that zeroes a[p, q]
    mag = abs(a_pq)
    ph = a_pq / mag
    tau = (a_qq - a_pp) / (2.0 * mag)
    t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1.0 + tau * tau))
    c = 1.0 / math.sqrt(1.0 + t * t)
    s = t * c
    return c, s * ph, s * ph.conjugate()


def _jacobi_small(h: np.ndarray, max_sweeps: int) -> tuple[np.ndarray, np.ndarray]:
    # plain Python complex arithmetic; numpy call overhead dominates below n ~ 8
    n = h.shape[0]
    a = [[complex(x) for x in row] for row in h.tolist()]
    v = [[1.0 + 0j if i == j else 0j for j in range(n)] for i in range(n)]
    target = JACOBI_THRESHOLD * math.sqrt(sum(abs(x) ** 2 for row in a for x in row))
    for _ in range(max_sweeps):
        off = math.sqrt(sum(abs(a[i][j]) ** 2 for i in range(n) for j in range(n) if i != j))
        if off <= target:
            return np.array([a[i][i].real for i in range(n)]), np.array(v)
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p][q]) <= 1e-300:
                    continue
                c, sp, sq = _rotation(a[p][q], a[p][p].real, a[q][q].real)
                for row in a:
                    x, y = row[p], row[q]
                    row[p], row[q] = c * x - sq * y, sp * x + c * y
                ap, aq = a[p], a[q]
                for j in range(n):
                    x, y = ap[j], aq[j]
                    ap[j], aq[j] = c * x - sp * y, sq * x + c * y
                ap[q] = aq[p] = 0j
                for row in v:
                    x, y = row[p], row[q]
                    row[p], row[q] = c * x - sq * y, sp * x + c * y
    raise ConvergenceError(f"Jacobi eigensolver did not converge in {max_sweeps} sweeps")


def _jacobi_dense(h: np.ndarray, max_sweeps: int) -> tuple[np.ndarray, np.ndarray]:
    a = np.array(h, dtype=np.complex128)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    target = JACOBI_THRESHOLD * np.linalg.norm(a)
    for _ in range(max_sweeps):
        if np.linalg.norm(a - np.diag(a.diagonal())) <= target:
            return a.diagonal().real.copy(), v
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) <= 1e-300:
                    continue
                c, sp, sq = _rotation(a[p, q], a[p, p].real, a[q, q].real)
                x, y = a[:, p].copy(), a[:, q].copy()
                a[:, p], a[:, q] = c * x - sq * y, sp * x + c * y
                x, y = a[p, :].copy(), a[q, :].copy()
                a[p, :], a[q, :] = c * x - sp * y, sq * x + c * y
                a[p, q] = a[q, p] = 0.0
                x, y = v[:, p].copy(), v[:, q].copy()
                v[:, p], v[:, q] = c * x - sq * y, sp * x + c * y
    raise ConvergenceError(f"Jacobi eigensolver did not converge in {max_sweeps} sweeps")


def _jacobi(h: np.ndarray, max_sweeps: int) -> tuple[np.ndarray, np.ndarray]:
    n = h.shape[0]
    if n == 1 or not np.any(h):
        return h.diagonal().real.copy(), np.eye(n, dtype=np.complex128)
    if n <= 8:
        return _jacobi_small(h, max_sweeps)
    return _jacobi_dense(h, max_sweeps)


def herm_eig(h: np.ndarray, max_sweeps: int = JACOBI_MAX_SWEEPS) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.

    Eigenvalues are returned in descending order; eigenvectors are the columns
    of ``vectors``. Raises :class:`ConvergenceError` after ``max_sweeps``.
    """
    values, vectors = _jacobi(h, max_sweeps)
    order = np.argsort(-values, kind="stable")
    return EigenDecomposition(_frozen(values[order]), _frozen(vectors[:, order]))


def spectral_norm(a: np.ndarray) -> float:
    """Largest singular value, ``sqrt(lambda_max(A^H A))``.

    Hermitian and skew-Hermitian inputs (nested commutators of Hermitian
    matrices are one or the other) are handled through their own spectrum,
    which avoids squaring the condition number.
    """
    a = np.asarray(a, dtype=np.complex128)
    scale = float(np.max(np.abs(a))) if a.size else 0.0
    if scale == 0.0:
        return 0.0
    ah = a.conj().T
    if np.max(np.abs(a - ah)) <= _SYMMETRY_SLACK * scale:
        return float(np.max(np.abs(_jacobi(0.5 * (a + ah), JACOBI_MAX_SWEEPS)[0])))
    if np.max(np.abs(a + ah)) <= _SYMMETRY_SLACK * scale:
        return float(np.max(np.abs(_jacobi(0.5j * (a - ah), JACOBI_MAX_SWEEPS)[0])))
    gram = ah @ a
    gram = 0.5 * (gram + gram.conj().T)
    return math.sqrt(max(float(np.max(_jacobi(gram, JACOBI_MAX_SWEEPS)[0])), 0.0))


def unitary_exp(h: np.ndarray, theta: float = 1.0) -> np.ndarray:
    """``exp(-i theta h)`` for Hermitian ``h``."""
    return herm_eig(h).exp(theta)


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    _check_pair(a, b)
    return a @ b - b @ a


def ad_power(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """``(ad a)^p (b)``: the p-fold nested commutator ``[a, [a, ..., [a, b]]]``."""
    _check_pair(a, b)
    if p < 0:
        raise ValueError("p must be non-negative")
    out = np.asarray(b, dtype=np.complex128)
    for _ in range(p):
        out = a @ out - out @ a
    return out


def conjugate(u: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``u b u^H``; equals ``exp(-i theta ad h)(b)`` when ``u = exp(-i theta h)``."""
    _check_pair(u, b)
    return u @ b @ u.conj().T


def ad_exp_series(a: np.ndarray, b: np.ndarray, t: complex, tol: float = 1e-13) -> np.ndarray:
    """Truncated series ``sum_p t^p (ad a)^p(b) / p!``.

    Terms are added until the remainder bound
    ``x^(P+1) e^x / (P+1)! * ||b||`` with ``x = |t| * 2||a||`` drops below ``tol``.
    """
    _check_pair(a, b)
    if tol <= 0:
        raise ValueError("tol must be positive")
    b = np.asarray(b, dtype=np.complex128)
    x = abs(t) * 2.0 * spectral_norm(a)
    bnorm = spectral_norm(b)
    total = b.copy()
    term = b
    coeff = 1.0 + 0j
    p = 0
    rem_factor = x  # x^(p+1)/(p+1)!
    while bnorm * rem_factor * math.exp(x) >= tol:
        p += 1
        term = a @ term - term @ a
        coeff = coeff * t / p
        total = total + coeff * term
        rem_factor *= x / (p + 1)
        if p > 10_000:
            raise ConvergenceError("ad-exponential series did not reach tolerance")
    return total
