"""Empirical certification of emitted bounds and numerical checks of the underlying identities."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bounds import Method, eta_table
from .circuit import (
    Circuit,
    Mode,
    PerturbationSpec,
    basis_state,
    effective_hamiltonian,
    ideal_state,
    perturbed_state,
    perturbed_states,
)
from .matcore import ad_exp_series, conjugate, spectral_norm, unitary_exp

VIOLATION_TOL = 1e-9
_CHUNK = 4096

# methods whose floors are valid for each sampling mode
_VALID = {
    Mode.UNIFORM: {Method.BASELINE, Method.THEOREM1, Method.THEOREM2},
    Mode.PER_GATE: {Method.BASELINE, Method.THEOREM2},
}


@dataclass(frozen=True)
class VerificationConfig:
    samples: int
    seed: int
    eps_bar: float
    mode: Mode = Mode.PER_GATE
    step: float = 1e-3

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        if self.samples < 1:
            raise ValueError("samples must be at least 1")
        if self.step <= 0:
            raise ValueError("step must be positive")
        if self.eps_bar < 0:
            raise ValueError("eps_bar must be non-negative")


@dataclass(frozen=True)
class VerificationReport:
    min_fidelity: float
    violations: int
    worst_sample: tuple[float, ...]
    per_method_floors: dict[str, float]
    per_method_violations: dict[str, int]
    samples: int
    mode: Mode
    eps_bar: float
    appendix_residuals: dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def as_dict(self) -> dict:
        return {
            "samples": self.samples,
            "mode": self.mode.value,
            "eps_bar": self.eps_bar,
            "min_fidelity": self.min_fidelity,
            "violations": self.violations,
            "worst_sample": list(self.worst_sample),
            "per_method_floors": dict(self.per_method_floors),
            "per_method_violations": dict(self.per_method_violations),
            "appendix_residuals": dict(self.appendix_residuals),
        }


_GOLDEN = np.uint64(0x9E3779B97F4A7C15)


def _splitmix64(x: np.ndarray) -> np.ndarray:
    z = x + _GOLDEN
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def counter_uniforms(seed: int, indices: np.ndarray, width: int) -> np.ndarray:
    """Uniforms in [0, 1) keyed by ``(seed, sample index, coordinate)``.

    Each value depends only on its key, so any partition or ordering of the
    sample indices reproduces the same numbers bit for bit.
    """
    key = _splitmix64(np.array([seed & 0xFFFFFFFFFFFFFFFF], dtype=np.uint64))[0]
    idx = np.asarray(indices, dtype=np.uint64)[:, None] * np.uint64(width) + np.arange(width, dtype=np.uint64)
    bits = _splitmix64(_splitmix64(idx) ^ key)
    return (bits >> np.uint64(11)).astype(np.float64) * (1.0 / 2**53)


def sample_perturbations(cfg: VerificationConfig, n_gates: int, start: int = 0, count: int | None = None) -> np.ndarray:
    """Per-gate perturbation rows for samples ``start .. start+count-1`` (shape ``(count, N)``)."""
    count = cfg.samples - start if count is None else count
    idx = np.arange(start, start + count)
    if cfg.mode is Mode.UNIFORM:
        u = counter_uniforms(cfg.seed, idx, 1)
        return np.repeat(cfg.eps_bar * (2.0 * u - 1.0), n_gates, axis=1)
    return cfg.eps_bar * (2.0 * counter_uniforms(cfg.seed, idx, n_gates) - 1.0)


def monte_carlo_check(
    c: Circuit,
    cfg: VerificationConfig,
    floors: dict,
    psi0: np.ndarray | None = None,
    identity_draws: int = 4,
) -> VerificationReport:
    """Sample perturbations in the eps_bar cube and count fidelities below any floor.

    ``floors`` maps a method (or its name) to the floor computed for the same
    ``eps_bar``. A floor from a method that does not cover ``cfg.mode`` is an
    error, e.g. the common-error bound under independent per-gate errors.
    """
    floors = {Method(k): float(v) for k, v in floors.items()}
    bad = set(floors) - _VALID[cfg.mode]
    if bad:
        raise ValueError(f"floors {sorted(m.value for m in bad)} do not apply to {cfg.mode.value} sampling")
    psi0 = basis_state(c.dim) if psi0 is None else psi0
    ideal = ideal_state(c, psi0)
    n = len(c)
    best_val, best_row = 2.0, None
    counts = {m: 0 for m in floors}
    any_bad = 0
    for start in range(0, cfg.samples, _CHUNK):
        count = min(_CHUNK, cfg.samples - start)
        eps = sample_perturbations(cfg, n, start, count)
        fid = np.minimum(np.abs(perturbed_states(c, psi0, eps) @ ideal.conj()), 1.0)
        i = int(np.argmin(fid))
        if fid[i] < best_val:
            best_val, best_row = float(fid[i]), eps[i]
        worst = np.zeros(count, dtype=bool)
        for m, floor in floors.items():
            below = fid < floor - VIOLATION_TOL
            counts[m] += int(below.sum())
            worst |= below
        any_bad += int(worst.sum())
    if cfg.mode is Mode.UNIFORM:
        worst_sample = (float(best_row[0]),)
    else:
        worst_sample = tuple(float(x) for x in best_row)
    residuals = identity_residuals(c, cfg, identity_draws) if identity_draws else {}
    return VerificationReport(
        min_fidelity=best_val,
        violations=any_bad,
        worst_sample=worst_sample,
        per_method_floors={m.value: f for m, f in floors.items()},
        per_method_violations={m.value: v for m, v in counts.items()},
        samples=cfg.samples,
        mode=cfg.mode,
        eps_bar=cfg.eps_bar,
        appendix_residuals=residuals,
    )


def _nested_ad_exp(c: Circuit, scales, k: int, tol: float) -> np.ndarray:
    # exp(-i s_1 ad H_1) ... exp(-i s_{k-1} ad H_{k-1}) (H_k), each factor by its series
    hs = c.hamiltonians
    m = hs[k]
    for j in range(k - 1, -1, -1):
        m = ad_exp_series(hs[j], m, -1j * scales[j], tol)
    return m


def appendix_a_check(c: Circuit, t: float, eps, tol: float = 1e-14) -> float:
    """Max over ``k`` of ``||U_1...U_{k-1} H_k - [nested ad-exponentials](H_k) U_1...U_{k-1}||``.

    ``U_j = exp(-i(1 + eps_j t) H_j)``; the ad-exponentials are summed as
    series, so the check is independent of the conjugation route.
    """
    eps = list(eps)
    if len(eps) != len(c):
        raise ValueError(f"expected {len(c)} per-gate values")
    scales = [1.0 + e * t for e in eps]
    worst = 0.0
    prefix = np.eye(c.dim, dtype=np.complex128)
    for k in range(1, len(c)):
        prefix = prefix @ c.gates[k - 1].unitary(scales[k - 1])
        lhs = prefix @ c.hamiltonians[k]
        rhs = _nested_ad_exp(c, scales, k, tol) @ prefix
        worst = max(worst, spectral_norm(lhs - rhs))
    return worst


def appendix_b_check(c: Circuit, t: float, eps, trunc: int = 40, eps_bar: float | None = None) -> float:
    """Slack (majorant minus exact difference) of the perturbed-conjugation estimate; min over ``k``.

    Exact side: ``||chain_t(H_k) - chain_0(H_k)||`` with conjugation by
    ``exp(-i(1 + eps_j t) H_j)`` versus the ideal gates. Majorant:
    ``sum_{p<=trunc} (eps_bar |t|)^p eta_kp / p!`` plus a certified tail.
    """
    eps = [float(e) for e in eps]
    if len(eps) != len(c):
        raise ValueError(f"expected {len(c)} per-gate values")
    if len(c) < 2:
        raise ValueError("needs at least two gates")
    bar = max(abs(e) for e in eps) if eps_bar is None else eps_bar
    if max(abs(e) for e in eps) > bar + 1e-15:
        raise ValueError("|eps_k| exceeds eps_bar")
    pert = [_hermitian(m) for m in _chain(c, [1.0 + e * t for e in eps])]
    ideal = [_hermitian(m) for m in _chain(c, [1.0] * len(c))]
    table = eta_table(c, 0.0, order=trunc)
    r = bar * abs(t)
    norms = c.norms
    slack = math.inf
    for k in range(1, len(c)):
        lhs = spectral_norm(pert[k] - ideal[k])
        rhs = sum(r**p * table.eta(k + 1, p) / math.factorial(p) for p in range(1, trunc + 1))
        for j in range(k):
            x = 2.0 * norms[j] * r
            rhs += norms[k] * x ** (trunc + 1) * math.exp(x) / math.factorial(trunc + 1)
        slack = min(slack, rhs - lhs)
    return slack


def _chain(c: Circuit, scales) -> list[np.ndarray]:
    out, prefix = [], np.eye(c.dim, dtype=np.complex128)
    for gate, s in zip(c.gates, scales):
        out.append(conjugate(prefix, gate.hamiltonian))
        prefix = prefix @ gate.unitary(s)
    return out


def _hermitian(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.conj().T)


def hadamard_check(a: np.ndarray, b: np.ndarray, t: float, tol: float = 1e-13) -> float:
    """``||sum_p (-it)^p (ad a)^p(b)/p! - e^{-ita} b e^{ita}||`` for Hermitian ``a``."""
    return spectral_norm(ad_exp_series(a, b, -1j * t, tol) - conjugate(unitary_exp(a, t), b))


def ode_crosscheck(c: Circuit, eps: float, step: float = 1e-3, psi0: np.ndarray | None = None) -> float:
    """Integrate ``psi' = -i H(t) psi`` from 0 to ``eps`` with RK4 and compare to the product formula.

    No renormalisation is applied, so norm drift is part of the reported error.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    psi0 = basis_state(c.dim) if psi0 is None else psi0
    psi = ideal_state(c, psi0)
    steps = max(1, math.ceil(abs(eps) / step - 1e-12)) if eps else 0
    h = eps / steps if steps else 0.0
    t = 0.0
    gen = effective_hamiltonian(c, t)
    for _ in range(steps):
        mid = effective_hamiltonian(c, t + 0.5 * h)
        end = effective_hamiltonian(c, t + h)
        k1 = -1j * (gen @ psi)
        k2 = -1j * (mid @ (psi + 0.5 * h * k1))
        k3 = -1j * (mid @ (psi + 0.5 * h * k2))
        k4 = -1j * (end @ (psi + h * k3))
        psi = psi + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        t += h
        gen = end
    exact = perturbed_state(c, psi0, PerturbationSpec.uniform(eps))
    return float(np.linalg.norm(psi - exact))


def identity_residuals(c: Circuit, cfg: VerificationConfig, draws: int = 4) -> dict[str, float]:
    """Worst residuals of the algebraic identity checks over a few seeded draws."""
    n = len(c)
    u = counter_uniforms(cfg.seed ^ 0x5A5A5A5A, np.arange(draws), n + 1)
    out = {"hadamard": 0.0}
    if n >= 2:
        out["appendix_a"] = 0.0
        out["appendix_b_min_slack"] = math.inf
    for row in u:
        t = 2.0 * row[0] - 1.0
        eps = cfg.eps_bar * (2.0 * row[1:] - 1.0)
        h = c.hamiltonians
        out["hadamard"] = max(out["hadamard"], hadamard_check(h[0], h[-1], t))
        if n >= 2:
            out["appendix_a"] = max(out["appendix_a"], appendix_a_check(c, t, eps))
            out["appendix_b_min_slack"] = min(
                out["appendix_b_min_slack"], appendix_b_check(c, t, eps, eps_bar=cfg.eps_bar)
            )
    return out
