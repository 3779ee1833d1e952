"""The multi-parameter norm constant ``h0 = max_{||lam||_inf = 1} ||sum_k lam_k A_k||_2``.

Three routes:

* :func:`h0_vertex_enum`: exact for any N up to :data:`VERTEX_ENUM_MAX_GATES`.
  ``lam -> ||sum lam_k A_k||`` is convex, so its maximum over the cube
  ``[-1, 1]^N`` sits on a vertex; sign symmetry halves the vertex count.
* :func:`h0_appendix_c`: closed form for two 2x2 matrices built from
  trace/determinant invariants of the pencil ``A + xB`` and the real roots of a
  degree-6 polynomial in ``x``.
* :func:`h0_triangle_upper`: ``sum_k ||H_k||``, always a valid upper bound.

Never under-estimate h0: an underestimate would overstate the fidelity floor.
"""

from __future__ import annotations

import enum
import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .circuit import Circuit
from .matcore import spectral_norm
from .polyroots import ZeroPolynomialError, real_roots_in_open_interval

log = logging.getLogger(__name__)

VERTEX_ENUM_MAX_GATES = 20
# discriminant roots this close to +-1 are attributed to the interval ends
BOUNDARY_GUARD = 1e-6
_REL_ZERO = 1e-12


class H0Method(str, enum.Enum):
    VERTEX_ENUM = "vertex"
    APPENDIX_C = "appendix-c"
    TRIANGLE_UPPER = "triangle"


class AppendixCError(ValueError):
    """The closed form does not apply; fall back to vertex enumeration."""


class DegenerateConfiguration(AppendixCError):
    """``s'(x)`` and ``d'(x)`` can vanish together, so critical points are not isolated."""


class ConditionCViolated(AppendixCError):
    """The squared singular values of ``A + xB`` cross inside ``(-1, 1)``."""


class TooManyGates(ValueError):
    pass


@dataclass(frozen=True)
class H0Result:
    value: float
    method: H0Method
    witness: Any = None
    is_upper_bound_only: bool = False
    data: "AppendixCData | None" = None


@dataclass(frozen=True)
class AppendixCData:
    """Pencil invariants for one ordered pair ``(A, B)``.

    ``s(x) = tr((A+xB)^H (A+xB)) = tau0 + tau1 x + tau2 x^2`` and
    ``d(x) = |det(A+xB)|^2 = sum_k omega_k x^k``; ``zeta`` are the coefficients
    of ``d'^2 - s s' d' + d s'^2`` whose roots in (-1, 1) form ``s_roots``.
    """

    tau: tuple[float, float, float]
    mu: tuple[complex, complex, complex]
    omega: tuple[float, ...]
    zeta: tuple[float, ...]
    s_roots: tuple[float, ...]
    c_set_empty: bool
    appc0_ok: bool
    gamma: float
    degenerate_pencil: bool = False
    discarded: tuple[float, ...] = ()
    kappa_residual: float = 0.0
    critical: tuple[tuple[float, float], ...] = field(default=())


def h0_vertex_enum(gens: list[np.ndarray] | Any) -> H0Result:
    """Maximise ``||sum lam_k A_k||`` over sign vectors with ``lam_1 = +1``."""
    mats = list(getattr(gens, "a", gens))
    n = len(mats)
    if n > VERTEX_ENUM_MAX_GATES:
        raise TooManyGates(
            f"vertex enumeration is capped at {VERTEX_ENUM_MAX_GATES} gates (got {n}); "
            "use the triangle upper bound"
        )
    best, best_signs = -1.0, None
    # lexicographic order over the free signs makes the first maximiser the tie-break winner
    for tail in itertools.product((-1, 1), repeat=n - 1):
        signs = (1,) + tail
        total = sum(s * m for s, m in zip(signs, mats))
        val = spectral_norm(total)
        if val > best:
            best, best_signs = val, signs
    return H0Result(best, H0Method.VERTEX_ENUM, witness=best_signs)


def h0_triangle_upper(c: Circuit) -> H0Result:
    return H0Result(c.norm_sum, H0Method.TRIANGLE_UPPER, is_upper_bound_only=True)


def _det2(m: np.ndarray) -> complex:
    return complex(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])


def pencil_invariants(a: np.ndarray, b: np.ndarray) -> tuple[tuple, tuple, tuple]:
    tau0 = float(np.trace(a.conj().T @ a).real)
    tau1 = 2.0 * float(np.trace(a.conj().T @ b).real)
    tau2 = float(np.trace(b.conj().T @ b).real)
    mu0 = _det2(a)
    mu1 = complex(a[0, 0] * b[1, 1] - b[0, 1] * a[1, 0] + b[0, 0] * a[1, 1] - a[0, 1] * b[1, 0])
    mu2 = _det2(b)
    w0 = abs(mu0) ** 2
    w1 = 2.0 * (mu0.conjugate() * mu1).real
    w2 = abs(mu1) ** 2 + 2.0 * (mu0.conjugate() * mu2).real
    w3 = 2.0 * (mu1.conjugate() * mu2).real
    w4 = abs(mu2) ** 2
    return (tau0, tau1, tau2), (mu0, mu1, mu2), (w0, w1, w2, w3, w4)


def zeta_coefficients(tau, omega) -> tuple[float, ...]:
    t0, t1, t2 = tau
    w0, w1, w2, w3, w4 = omega
    return (
        -w1 * t0 * t1 + w0 * t1**2 + w1**2,
        -2 * t0 * t1 * w2 - 2 * t0 * w1 * t2 + 4 * w0 * t1 * t2 + 4 * w1 * w2,
        -3 * t0 * t1 * w3 - 4 * t0 * t2 * w2 - w2 * t1**2 + w1 * t1 * t2 + 4 * w0 * t2**2
        + 6 * w1 * w3 + 4 * w2**2,
        -4 * t0 * t1 * w4 - 6 * t0 * t2 * w3 - 2 * w3 * t1**2 - 2 * w2 * t1 * t2
        + 2 * w1 * t2**2 + 8 * w1 * w4 + 12 * w2 * w3,
        -8 * t0 * t2 * w4 - 3 * w4 * t1**2 - 5 * w3 * t1 * t2 + 16 * w2 * w4 + 9 * w3**2,
        -8 * t1 * t2 * w4 - 2 * w3 * t2**2 + 24 * w3 * w4,
        -4 * t2**2 * w4 + 16 * w4**2,
    )


def _discriminant_coefficients(tau, omega) -> tuple[float, ...]:
    # s(x)^2 - 4 d(x): zero exactly where the two squared singular values coincide
    t0, t1, t2 = tau
    w0, w1, w2, w3, w4 = omega
    return (
        t0**2 - 4 * w0,
        2 * t0 * t1 - 4 * w1,
        t1**2 + 2 * t0 * t2 - 4 * w2,
        2 * t1 * t2 - 4 * w3,
        t2**2 - 4 * w4,
    )


def _nondegeneracy(tau, omega) -> tuple[float, float]:
    # 2 tau2^3 d'(x*) where s'(x*) = 0; returned with the scale of its terms
    t0, t1, t2 = tau
    w0, w1, w2, w3, w4 = omega
    terms = (2 * w1 * t2**3, -2 * t1 * t2**2 * w2, 1.5 * t2 * w3 * t1**2, -w4 * t1**3)
    return sum(terms), sum(abs(t) for t in terms)


def _is_zero_poly(coeffs, scale: float) -> bool:
    return all(abs(c) <= _REL_ZERO * scale for c in coeffs)


def appendix_c_data(a: np.ndarray, b: np.ndarray) -> AppendixCData:
    """Invariants, critical set and ``Gamma(A, B)`` for the ordered pair ``(A, B)``.

    Raises :class:`DegenerateConfiguration` or :class:`ConditionCViolated`
    when the closed form is not applicable.
    """
    if a.shape != (2, 2) or b.shape != (2, 2):
        raise ValueError("the closed form is implemented for 2x2 matrices only")
    tau, mu, omega = pencil_invariants(a, b)
    if tau[0] == 0.0 or tau[2] == 0.0:
        raise DegenerateConfiguration("one of the matrices is zero")
    scale = max(tau[0], tau[2]) ** 2
    disc = _discriminant_coefficients(tau, omega)
    cond, cond_scale = _nondegeneracy(tau, omega)
    appc0_ok = abs(cond) > _REL_ZERO * max(cond_scale, 1e-300)

    if _is_zero_poly(disc, scale):
        # both squared singular values coincide for every x: kappa(x) = s(x)/2 exactly,
        # whose only critical point is the vertex of the parabola s
        x_star = -tau[1] / (2.0 * tau[2])
        crit = ()
        gamma = 0.0
        if -1.0 < x_star < 1.0:
            kappa = 0.5 * (tau[0] + tau[1] * x_star + tau[2] * x_star**2)
            gamma = math.sqrt(max(kappa, 0.0))
            crit = ((x_star, gamma),)
        return AppendixCData(
            tau, mu, omega, zeta_coefficients(tau, omega), tuple(x for x, _ in crit),
            c_set_empty=False, appc0_ok=appc0_ok, gamma=gamma, degenerate_pencil=True, critical=crit,
        )

    if not appc0_ok:
        raise DegenerateConfiguration(
            f"nondegeneracy expression vanishes ({cond:.3e}); fall back to vertex enumeration"
        )
    crossings = real_roots_in_open_interval(disc, -1.0 + BOUNDARY_GUARD, 1.0 - BOUNDARY_GUARD)
    if crossings:
        raise ConditionCViolated(
            f"singular values cross at x = {crossings}; fall back to vertex enumeration"
        )
    zeta = zeta_coefficients(tau, omega)
    try:
        roots = real_roots_in_open_interval(zeta, -1.0, 1.0)
    except ZeroPolynomialError:
        raise DegenerateConfiguration("critical-point polynomial vanishes identically") from None

    t0, t1, t2 = tau
    w0, w1, w2, w3, w4 = omega
    kept, discarded = [], []
    residual = 0.0
    for x in roots:
        num = w1 + 2 * w2 * x + 3 * w3 * x**2 + 4 * w4 * x**3
        den = t1 + 2 * t2 * x
        if abs(den) < 1e-12:
            discarded.append(x)
            continue
        kappa = num / den
        if kappa < -1e-12:
            discarded.append(x)
            continue
        s = t0 + t1 * x + t2 * x**2
        d = w0 + w1 * x + w2 * x**2 + w3 * x**3 + w4 * x**4
        residual = max(residual, abs(kappa**2 - s * kappa + d) / max(s * s, 1e-300))
        kept.append((x, math.sqrt(max(kappa, 0.0))))
    if discarded:
        log.info("discarded critical points %s (vanishing s' or negative radicand)", discarded)
    gamma = max((g for _, g in kept), default=0.0)
    return AppendixCData(
        tau, mu, omega, zeta, tuple(roots), c_set_empty=True, appc0_ok=True, gamma=gamma,
        discarded=tuple(discarded), kappa_residual=residual, critical=tuple(kept),
    )


def h0_appendix_c(a: np.ndarray, b: np.ndarray) -> H0Result:
    """``max(||A+B||, ||A-B||, Gamma(A,B), Gamma(B,A))`` for two 2x2 matrices.

    Both orderings must satisfy the applicability conditions. Pencils whose two
    squared singular values coincide identically (e.g. traceless Hermitian
    pairs) are handled exactly through ``kappa = s/2``.
    """
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    ab = appendix_c_data(a, b)
    ba = appendix_c_data(b, a)
    candidates = [
        (spectral_norm(a + b), ("vertex", 1.0)),
        (spectral_norm(a - b), ("vertex", -1.0)),
    ]
    for x, g in ab.critical:
        candidates.append((g, ("A+xB", x)))
    for x, g in ba.critical:
        candidates.append((g, ("xA+B", x)))
    value, witness = max(candidates, key=lambda c: c[0])
    return H0Result(value, H0Method.APPENDIX_C, witness=witness, data=ab)


def compute_h0(c: Circuit, method: str | H0Method | None = None, gens=None) -> tuple[H0Result, list[str]]:
    """Pick an h0 route; ``None`` means auto. Returns the result and any fallback warnings.

    Auto order: closed form for two 2x2 gates, then vertex enumeration, then the
    triangle upper bound.
    """
    from .bounds import conjugated_generators

    warnings: list[str] = []
    if method is not None:
        method = H0Method(method)
    if method is H0Method.TRIANGLE_UPPER:
        return h0_triangle_upper(c), warnings
    mats = (gens or conjugated_generators(c)).a
    if method is H0Method.APPENDIX_C:
        if len(mats) != 2 or c.dim != 2:
            raise AppendixCError("the closed form needs exactly two 2x2 generators")
        return h0_appendix_c(mats[0], mats[1]), warnings
    if method is None and len(mats) == 2 and c.dim == 2:
        try:
            return h0_appendix_c(mats[0], mats[1]), warnings
        except AppendixCError as exc:
            warnings.append(f"closed-form h0 not applicable ({exc}); used vertex enumeration")
    if method is H0Method.VERTEX_ENUM or len(mats) <= VERTEX_ENUM_MAX_GATES:
        return h0_vertex_enum(mats), warnings
    warnings.append(f"{len(mats)} gates exceed the vertex-enumeration cap; h0 replaced by its triangle upper bound")
    return h0_triangle_upper(c), warnings
