"""Circuit model: ideal and over/under-rotated evolution, fidelity, effective generators.

Ordering convention: ``Circuit(gates=(g1, ..., gN))`` produces the output
``exp(-i H1) ... exp(-i HN) |psi0>``. The list is the left-to-right operator
product, so the LAST gate acts on the state FIRST.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .matcore import EigenDecomposition, MatrixError, as_hermitian, conjugate, herm_eig

STATE_TOL = 1e-10

PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
_PAULI = {"rx": PAULI_X, "ry": PAULI_Y, "rz": PAULI_Z}


@dataclass(frozen=True, eq=False)
class Gate:
    label: str
    hamiltonian: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "hamiltonian", as_hermitian(self.hamiltonian))

    @property
    def dim(self) -> int:
        return self.hamiltonian.shape[0]

    @cached_property
    def eig(self) -> EigenDecomposition:
        return herm_eig(self.hamiltonian)

    @cached_property
    def norm(self) -> float:
        return float(np.max(np.abs(self.eig.values)))

    def unitary(self, scale: float = 1.0) -> np.ndarray:
        """``exp(-i * scale * H)``."""
        return self.eig.exp(scale)


def rotation_gate(axis: str, theta: float, label: str | None = None) -> Gate:
    """Single-qubit rotation ``R_a(theta) = exp(-i theta/2 P_a)``; generator ``(theta/2) P_a``."""
    try:
        pauli = _PAULI[axis]
    except KeyError:
        raise ValueError(f"unknown rotation axis {axis!r}; expected rx, ry or rz") from None
    return Gate(label or f"{axis}({theta:g})", 0.5 * theta * pauli)


@dataclass(frozen=True, eq=False)
class Circuit:
    gates: tuple[Gate, ...]

    def __post_init__(self):
        gates = tuple(self.gates)
        if not gates:
            raise ValueError("a circuit needs at least one gate")
        dims = {g.dim for g in gates}
        if len(dims) != 1:
            raise MatrixError(f"gates have mismatched dimensions {sorted(dims)}")
        object.__setattr__(self, "gates", gates)

    @classmethod
    def from_hamiltonians(cls, hamiltonians: Sequence, labels: Sequence[str] | None = None) -> "Circuit":
        labels = labels or [f"H{k + 1}" for k in range(len(hamiltonians))]
        return cls(tuple(Gate(lab, h) for lab, h in zip(labels, hamiltonians)))

    @property
    def dim(self) -> int:
        return self.gates[0].dim

    def __len__(self) -> int:
        return len(self.gates)

    @property
    def hamiltonians(self) -> list[np.ndarray]:
        return [g.hamiltonian for g in self.gates]

    @cached_property
    def norms(self) -> tuple[float, ...]:
        return tuple(g.norm for g in self.gates)

    @cached_property
    def norm_sum(self) -> float:
        return float(sum(self.norms))


class Mode(str, enum.Enum):
    UNIFORM = "uniform"
    PER_GATE = "per-gate"


@dataclass(frozen=True)
class PerturbationSpec:
    """Relative over-rotation of each gate: ``U_k = exp(-i (1 + eps_k) H_k)``.

    ``values`` is a single float for :attr:`Mode.UNIFORM` and a sequence of
    ``N`` floats for :attr:`Mode.PER_GATE`.
    """

    mode: Mode
    eps_bar: float
    values: float | tuple[float, ...] = field(default=0.0)

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        if self.eps_bar < 0:
            raise ValueError("eps_bar must be non-negative")
        if self.mode is Mode.UNIFORM:
            val = float(self.values)
            if abs(val) > self.eps_bar:
                raise ValueError(f"|eps| = {abs(val)} exceeds eps_bar = {self.eps_bar}")
            object.__setattr__(self, "values", val)
        else:
            vals = tuple(float(v) for v in np.atleast_1d(self.values))
            if vals and max(abs(v) for v in vals) > self.eps_bar:
                raise ValueError(f"||eps||_inf exceeds eps_bar = {self.eps_bar}")
            object.__setattr__(self, "values", vals)

    @classmethod
    def uniform(cls, eps: float, eps_bar: float | None = None) -> "PerturbationSpec":
        return cls(Mode.UNIFORM, abs(eps) if eps_bar is None else eps_bar, eps)

    @classmethod
    def per_gate(cls, eps: Sequence[float], eps_bar: float | None = None) -> "PerturbationSpec":
        eps = tuple(float(e) for e in eps)
        bar = max((abs(e) for e in eps), default=0.0) if eps_bar is None else eps_bar
        return cls(Mode.PER_GATE, bar, eps)

    def per_gate_values(self, n_gates: int) -> tuple[float, ...]:
        if self.mode is Mode.UNIFORM:
            return (self.values,) * n_gates
        if len(self.values) != n_gates:
            raise ValueError(f"expected {n_gates} per-gate values, got {len(self.values)}")
        return self.values


def as_state(psi, dim: int | None = None) -> np.ndarray:
    v = np.array(psi, dtype=np.complex128).reshape(-1)
    if dim is not None and v.shape[0] != dim:
        raise MatrixError(f"state has dimension {v.shape[0]}, circuit has {dim}")
    if abs(np.linalg.norm(v) - 1.0) > STATE_TOL:
        raise ValueError("state vector is not normalized")
    return v


def basis_state(dim: int, index: int = 0) -> np.ndarray:
    v = np.zeros(dim, dtype=np.complex128)
    v[index] = 1.0
    return v


def _evolve(c: Circuit, psi0, scales: Sequence[float]) -> np.ndarray:
    psi = as_state(psi0, c.dim)
    for gate, s in zip(reversed(c.gates), reversed(scales)):
        psi = gate.unitary(s) @ psi
    return psi


def ideal_state(c: Circuit, psi0) -> np.ndarray:
    """``exp(-i H1) ... exp(-i HN) psi0``."""
    return _evolve(c, psi0, [1.0] * len(c))


def perturbed_state(c: Circuit, psi0, p: PerturbationSpec) -> np.ndarray:
    eps = p.per_gate_values(len(c))
    return _evolve(c, psi0, [1.0 + e for e in eps])


def perturbed_states(c: Circuit, psi0, eps: np.ndarray) -> np.ndarray:
    """Vectorised :func:`perturbed_state` for a batch of per-gate perturbations.

    ``eps`` has shape ``(S, N)``; returns the ``(S, n)`` array of output states.
    """
    eps = np.asarray(eps, dtype=float)
    if eps.ndim != 2 or eps.shape[1] != len(c):
        raise ValueError(f"eps must have shape (samples, {len(c)})")
    psi = np.broadcast_to(as_state(psi0, c.dim), (eps.shape[0], c.dim)).copy()
    for k in range(len(c) - 1, -1, -1):
        eig = c.gates[k].eig
        coords = psi @ eig.vectors.conj()  # rows: V^H psi
        coords *= np.exp(-1j * np.outer(1.0 + eps[:, k], eig.values))
        psi = coords @ eig.vectors.T
    return psi


def fidelity(a, b) -> float:
    """``|<a, b>|``, clipped into [0, 1]."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.shape != b.shape:
        raise MatrixError(f"state dimension mismatch: {a.shape} vs {b.shape}")
    return float(min(1.0, abs(np.vdot(a, b))))


def _conjugation_chain(c: Circuit, scales: Sequence[float]) -> list[np.ndarray]:
    # term k: U_1 ... U_{k-1} H_k (U_1 ... U_{k-1})^H with U_j = exp(-i s_j H_j)
    terms = []
    prefix = np.eye(c.dim, dtype=np.complex128)
    for gate, s in zip(c.gates, scales):
        terms.append(conjugate(prefix, gate.hamiltonian))
        prefix = prefix @ gate.unitary(s)
    return terms


def _hermitian_part(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.conj().T)


def effective_hamiltonian(c: Circuit, t: float) -> np.ndarray:
    """Generator of ``t -> exp(-i(1+t)H1) ... exp(-i(1+t)HN) psi0``.

    ``H1 + exp(-i(1+t) ad H1)(H2) + ... + exp(-i(1+t) ad H1)...exp(-i(1+t) ad H_{N-1})(HN)``
    """
    if not np.isfinite(t):
        raise ValueError("t must be finite")
    return _hermitian_part(sum(_conjugation_chain(c, [1.0 + t] * len(c))))


def effective_hamiltonian_multi(c: Circuit, eps: PerturbationSpec | Sequence[float], t: float) -> np.ndarray:
    """Generator of ``t -> psi(t * eps)`` for per-gate perturbations ``eps``.

    ``sum_k eps_k exp(-i(1+eps_1 t) ad H1) ... exp(-i(1+eps_{k-1} t) ad H_{k-1})(H_k)``
    """
    if isinstance(eps, PerturbationSpec):
        if eps.mode is not Mode.PER_GATE:
            raise ValueError("effective_hamiltonian_multi needs a per-gate perturbation")
        eps = eps.values
    eps = tuple(float(e) for e in eps)
    if len(eps) != len(c):
        raise ValueError(f"expected {len(c)} per-gate values, got {len(eps)}")
    terms = _conjugation_chain(c, [1.0 + e * t for e in eps])
    return _hermitian_part(sum(e * term for e, term in zip(eps, terms)))


def conjugated_terms(c: Circuit, scales: Sequence[float] | None = None) -> list[np.ndarray]:
    """Each ``H_k`` conjugated by the preceding gates ``exp(-i s_j H_j)``, ``j < k``."""
    scales = [1.0] * len(c) if scales is None else list(scales)
    return [_hermitian_part(m) for m in _conjugation_chain(c, scales)]

