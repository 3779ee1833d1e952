"""Certified fidelity floors ``1 - M(eps_bar)`` for coherent over/under-rotation.

Three choices of ``M``:

* baseline: ``eps_bar^2 / 2 * (sum_k ||H_k||)^2``
* ``thm1`` (uniform perturbation): ``1/2 (||H0|| + S)^2 eps_bar^2``
* ``thm2`` (per-gate perturbation): ``1/2 (h0 + S)^2 eps_bar^2``

where ``H0 = sum_k A_k`` is the sum of conjugated generators and
``S = sum_{k>=2} sum_{p>=1} eps_bar^p eta_kp / (p+1)!`` measures how far the
generators are from commuting. ``S`` is truncated at order ``P`` and a
rigorous bound on the discarded tail is added back, so every reported ``M``
is an upper bound on the exact one.
"""

from __future__ import annotations

import enum
import logging
import math
import weakref
from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, conjugated_terms
from .h0solver import H0Result
from .matcore import conjugate, spectral_norm

log = logging.getLogger(__name__)

DEFAULT_TOL = 1e-12
MAX_ORDER = 60


class Method(str, enum.Enum):
    BASELINE = "baseline"
    THEOREM1 = "thm1"
    THEOREM2 = "thm2"


@dataclass(frozen=True)
class ConjugatedGenerators:
    a: list[np.ndarray]
    h0_matrix: np.ndarray
    h0_matrix_norm: float


def conjugated_generators(c: Circuit) -> ConjugatedGenerators:
    """``A_k = e^{-iH_1}...e^{-iH_{k-1}} H_k e^{iH_{k-1}}...e^{iH_1}`` and their sum."""
    a = conjugated_terms(c)
    h0 = sum(a)
    return ConjugatedGenerators(a, h0, spectral_norm(h0))


class _EtaTerms:
    """Lazily extended norms ``||(ad H_j)^p (B_jk)||`` for one circuit.

    ``B_jk = e^{-iH_{j+1}}...e^{-iH_{k-1}} H_k (...)^H``; ``eta_kp`` is the sum
    of these norms over ``j < k``.
    """

    def __init__(self, c: Circuit):
        self.circuit = c
        n = len(c)
        hs = c.hamiltonians
        us = [g.unitary() for g in c.gates]
        self.pairs: list[tuple[int, int]] = []
        self._current: list[np.ndarray] = []
        self.norms: list[list[float]] = []  # norms[i][p-1] for pair i
        for k in range(1, n):
            inner = hs[k]
            for j in range(k - 1, -1, -1):
                # inner = conj(U_{j+1} ... U_{k-1}, H_k)
                self.pairs.append((k, j))
                self._current.append(inner)
                self.norms.append([])
                inner = conjugate(us[j], inner)

    def extend(self, order: int) -> None:
        hs = self.circuit.hamiltonians
        for i, (k, j) in enumerate(self.pairs):
            row = self.norms[i]
            m = self._current[i]
            h = hs[j]
            while len(row) < order:
                m = h @ m - m @ h
                row.append(spectral_norm(m))
            self._current[i] = m


_ETA_CACHE: "weakref.WeakKeyDictionary[Circuit, _EtaTerms]" = weakref.WeakKeyDictionary()


def _eta_terms(c: Circuit) -> _EtaTerms:
    terms = _ETA_CACHE.get(c)
    if terms is None:
        terms = _ETA_CACHE[c] = _EtaTerms(c)
    return terms


@dataclass(frozen=True)
class EtaTable:
    """``entries[k-2, p-1] = eta_kp`` for ``k = 2..N``, ``p = 1..P``."""

    entries: np.ndarray
    truncation_order: int
    tail_bound: float
    eps_bar: float
    converged: bool = True

    def eta(self, k: int, p: int) -> float:
        return float(self.entries[k - 2, p - 1])

    def series(self) -> float:
        """Truncated ``sum_k sum_p eps_bar^p eta_kp / (p+1)!``, summed k-major, p ascending."""
        total = 0.0
        for row in self.entries:
            for p, eta in enumerate(row, start=1):
                total += self.eps_bar**p * eta / math.factorial(p + 1)
        return total


def _tail(terms: _EtaTerms, norms: tuple[float, ...], eps_bar: float, order: int) -> float:
    # ||(ad H_j)^p B|| <= (2||H_j||)^(p-P) ||(ad H_j)^P B|| for p > P, and
    # sum_{q>=1} y^q / (P+q+1)! <= y e^y / (P+2)!  with  y = 2||H_j|| eps_bar
    if eps_bar == 0.0:
        return 0.0
    total = 0.0
    lead = eps_bar**order / math.factorial(order + 2)
    for (k, j), row in zip(terms.pairs, terms.norms):
        y = 2.0 * norms[j] * eps_bar
        anchor = row[order - 1] if order > 0 else norms[k]
        total += anchor * lead * y * math.exp(y)
    return total


def eta_table(c: Circuit, eps_bar: float, tol: float = DEFAULT_TOL, order: int | None = None) -> EtaTable:
    """Build the eta table at the smallest order whose certified tail is below ``tol``.

    Pass ``order`` to force a truncation order instead. If the tail cannot be
    pushed below ``tol`` by :data:`MAX_ORDER`, the table is returned with
    ``converged=False`` and the achieved tail; the tail is still an honest bound.
    """
    if eps_bar < 0:
        raise ValueError("eps_bar must be non-negative")
    if tol <= 0:
        raise ValueError("tol must be positive")
    n = len(c)
    if n == 1:
        return EtaTable(np.zeros((0, 0)), 0, 0.0, eps_bar)
    terms = _eta_terms(c)
    norms = c.norms
    converged = True
    if order is None:
        p = 1
        while True:
            terms.extend(p)
            tail = _tail(terms, norms, eps_bar, p)
            if tail < tol:
                break
            if p >= MAX_ORDER:
                converged = False
                log.warning("eta series tail %.3e still above tol %.1e at order %d", tail, tol, p)
                break
            p += 1
        order = p
    else:
        if order < 1:
            raise ValueError("order must be at least 1")
        terms.extend(order)
        tail = _tail(terms, norms, eps_bar, order)
    entries = np.zeros((n - 1, order))
    for (k, _), row in zip(terms.pairs, terms.norms):
        entries[k - 1] += np.asarray(row[:order])
    return EtaTable(entries, order, tail, eps_bar, converged)


@dataclass(frozen=True)
class BoundReport:
    method: Method
    eps_bar: float
    m_value: float
    fidelity_floor: float
    h0: float | None = None
    h0_method: str | None = None
    truncation_order: int = 0
    tail_bound: float = 0.0
    converged: bool = True

    def as_dict(self) -> dict:
        return {
            "method": self.method.value,
            "eps_bar": self.eps_bar,
            "m_value": self.m_value,
            "fidelity_floor": self.fidelity_floor,
            "h0": self.h0,
            "h0_method": self.h0_method,
            "truncation_order": self.truncation_order,
            "tail_bound": self.tail_bound,
            "converged": self.converged,
        }


def _report(method: Method, eps_bar: float, m: float, **kw) -> BoundReport:
    m = float(m)
    return BoundReport(method, float(eps_bar), m, max(0.0, 1.0 - m), **kw)


def baseline_bound(c: Circuit, eps_bar: float) -> BoundReport:
    if eps_bar < 0:
        raise ValueError("eps_bar must be non-negative")
    return _report(Method.BASELINE, eps_bar, 0.5 * eps_bar**2 * c.norm_sum**2)


def _series_bound(method: Method, c: Circuit, eps_bar: float, lead: float, tol: float, **kw) -> BoundReport:
    if eps_bar == 0.0:
        return _report(method, 0.0, 0.0, **kw)
    table = eta_table(c, eps_bar, tol)
    s = table.series() + table.tail_bound
    m = 0.5 * (lead + s) ** 2 * eps_bar**2
    return _report(
        method, eps_bar, m,
        truncation_order=table.truncation_order, tail_bound=float(table.tail_bound), converged=table.converged, **kw,
    )


def theorem1_bound(c: Circuit, eps_bar: float, tol: float = DEFAULT_TOL) -> BoundReport:
    """Floor for a common relative error ``|eps| <= eps_bar`` on every gate."""
    if eps_bar < 0:
        raise ValueError("eps_bar must be non-negative")
    lead = conjugated_generators(c).h0_matrix_norm
    return _series_bound(Method.THEOREM1, c, eps_bar, lead, tol)


def theorem2_bound(c: Circuit, eps_bar: float, tol: float = DEFAULT_TOL, h0: float | H0Result | None = None) -> BoundReport:
    """Floor for independent relative errors ``||eps||_inf <= eps_bar``.

    ``h0`` defaults to the automatically selected exact route of
    :func:`qcrobust.h0solver.compute_h0`.
    """
    if eps_bar < 0:
        raise ValueError("eps_bar must be non-negative")
    if h0 is None:
        from .h0solver import compute_h0

        h0 = compute_h0(c)[0]
    h0_method = None
    if isinstance(h0, H0Result):
        h0_method = h0.method.value
        h0 = h0.value
    if h0 < 0:
        raise ValueError("h0 must be non-negative")
    # h0 <= sum ||H_k|| holds exactly; clamp away roundoff above it
    h0 = min(float(h0), c.norm_sum)
    return _series_bound(Method.THEOREM2, c, eps_bar, h0, tol, h0=h0, h0_method=h0_method)


def series_value(c: Circuit, eps_bar: float, tol: float = DEFAULT_TOL) -> tuple[float, float]:
    """Truncated commutator series and its tail bound at ``eps_bar``."""
    if len(c) == 1 or eps_bar == 0.0:
        return 0.0, 0.0
    table = eta_table(c, eps_bar, tol)
    return table.series(), table.tail_bound


def is_commuting(c: Circuit, atol: float = 1e-12) -> bool:
    """All first-order eta terms vanish, hence every eta_kp does."""
    if len(c) == 1:
        return True
    terms = _eta_terms(c)
    terms.extend(1)
    scale = max(1.0, max(c.norms) ** 2)
    return all(row[0] <= atol * scale for row in terms.norms)


def epsilon_max(
    c: Circuit, tol: float = 1e-10, h0: float | H0Result | None = None, series_tol: float = DEFAULT_TOL
) -> float | None:
    """Largest ``eps_bar`` below which the per-gate bound beats the baseline.

    Solves ``S(eps) = sum_k ||H_k|| - h0`` for the commutator series ``S``,
    which is strictly increasing when some ``eta_kp > 0``. Returns ``None``
    when all ``eta_kp`` vanish and ``h0 < sum ||H_k||`` (the per-gate bound
    wins for every ``eps_bar``), and ``0.0`` when ``h0`` equals the norm sum.
    """
    if h0 is None:
        from .h0solver import compute_h0

        h0 = compute_h0(c)[0]
    if isinstance(h0, H0Result):
        h0 = h0.value
    gap = c.norm_sum - float(h0)
    if gap <= 1e-12 * max(1.0, c.norm_sum):
        return 0.0
    if is_commuting(c):
        return None

    def above(eps: float) -> bool:
        # certified: truncated series is a lower bound on S
        return series_value(c, eps, series_tol)[0] > gap

    lo, hi = 1e-9, 2e-9
    if above(lo):
        return lo
    while not above(hi):
        lo, hi = hi, 2.0 * hi
        if hi > 1e3:
            raise RuntimeError("no crossover below eps_bar = 1e3")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if above(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def all_bounds(
    c: Circuit, eps_bar: float, methods=tuple(Method), tol: float = DEFAULT_TOL, h0: H0Result | float | None = None
) -> dict[Method, BoundReport]:
    out = {}
    for m in methods:
        m = Method(m)
        if m is Method.BASELINE:
            out[m] = baseline_bound(c, eps_bar)
        elif m is Method.THEOREM1:
            out[m] = theorem1_bound(c, eps_bar, tol)
        else:
            out[m] = theorem2_bound(c, eps_bar, tol, h0)
    return out
