"""JSON circuit documents and report documents.

Circuit document::

    {
      "dim": 2,
      "hamiltonians": [
        {"gate": "rz", "theta": 0.7853981633974483},
        {"label": "H2", "matrix": [[[0, 0], [0, -0.785]], [[0, 0.785], [0, 0]]]}
      ]
    }

Entries are listed in left-to-right product order: the output state is
``exp(-i H1) ... exp(-i HN) psi0``, so the LAST entry acts on the state FIRST.
Complex numbers are ``[re, im]`` pairs. Optional keys: ``description``,
``initial_state`` (list of ``[re, im]``), and ``reference`` holding published
values to compare against (``floors``, ``epsilon_max``, ``tolerance``,
``epsilon_max_tolerance``, ``note``).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .circuit import Circuit, Gate, as_state, rotation_gate
from .matcore import HERMITIAN_TOL, spectral_norm

ORDERING_NOTE = (
    "hamiltonians are listed in left-to-right product order: "
    "psi = exp(-i H1) ... exp(-i HN) psi0, so the last entry acts first"
)


class DocumentError(ValueError):
    """Malformed or invalid circuit document; the message names the offending field."""


@dataclass
class CircuitDocument:
    circuit: Circuit
    initial_state: np.ndarray | None = None
    description: str = ""
    reference: dict[str, Any] = field(default_factory=dict)


def _complex(value, where: str) -> complex:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if (
        isinstance(value, list)
        and len(value) == 2
        and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)
    ):
        z = complex(value[0], value[1])
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise DocumentError(f"{where}: non-finite entry")
        return z
    raise DocumentError(f"{where}: expected [re, im] pair, got {value!r}")


def _matrix(value, dim: int, where: str) -> np.ndarray:
    if not isinstance(value, list) or len(value) != dim:
        raise DocumentError(f"{where}: expected {dim} rows")
    m = np.zeros((dim, dim), dtype=np.complex128)
    for i, row in enumerate(value):
        if not isinstance(row, list) or len(row) != dim:
            raise DocumentError(f"{where}[{i}]: expected {dim} entries")
        for j, z in enumerate(row):
            m[i, j] = _complex(z, f"{where}[{i}][{j}]")
    asym = spectral_norm(m - m.conj().T)
    if asym > HERMITIAN_TOL * max(1.0, spectral_norm(m)):
        diff = np.abs(m - m.conj().T)
        i, j = np.unravel_index(int(np.argmax(diff)), diff.shape)
        raise DocumentError(
            f"{where}: not Hermitian; entry [{i}][{j}] = {m[i, j]} but conj([{j}][{i}]) = {np.conj(m[j, i])}"
        )
    return m


def _gate(entry, dim: int, k: int) -> Gate:
    where = f"hamiltonians[{k}]"
    if not isinstance(entry, dict):
        raise DocumentError(f"{where}: expected an object")
    if "gate" in entry:
        if dim != 2:
            raise DocumentError(f"{where}: built-in rotations need dim = 2")
        theta = entry.get("theta")
        if not isinstance(theta, (int, float)) or isinstance(theta, bool) or not math.isfinite(theta):
            raise DocumentError(f"{where}.theta: expected a finite number")
        try:
            return rotation_gate(entry["gate"], float(theta), entry.get("label"))
        except ValueError as exc:
            raise DocumentError(f"{where}.gate: {exc}") from None
    if "matrix" in entry:
        label = entry.get("label", f"H{k + 1}")
        return Gate(str(label), _matrix(entry["matrix"], dim, f"{where}.matrix"))
    raise DocumentError(f"{where}: needs either 'matrix' or 'gate'")


def parse_circuit_document(data: dict) -> CircuitDocument:
    if not isinstance(data, dict):
        raise DocumentError("document root must be an object")
    dim = data.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise DocumentError("dim: expected a positive integer")
    entries = data.get("hamiltonians")
    if not isinstance(entries, list) or not entries:
        raise DocumentError("hamiltonians: expected a non-empty list")
    circuit = Circuit(tuple(_gate(e, dim, k) for k, e in enumerate(entries)))
    psi0 = None
    if "initial_state" in data:
        raw = data["initial_state"]
        if not isinstance(raw, list) or len(raw) != dim:
            raise DocumentError(f"initial_state: expected {dim} entries")
        vec = [_complex(z, f"initial_state[{i}]") for i, z in enumerate(raw)]
        try:
            psi0 = as_state(vec, dim)
        except ValueError as exc:
            raise DocumentError(f"initial_state: {exc}") from None
    reference = data.get("reference", {})
    if not isinstance(reference, dict):
        raise DocumentError("reference: expected an object")
    return CircuitDocument(circuit, psi0, str(data.get("description", "")), reference)


def load_circuit_document(path: str | Path) -> CircuitDocument:
    text = str(path)
    if text.startswith("builtin:"):
        from .builtin import builtin_document

        return parse_circuit_document(builtin_document(text.split(":", 1)[1]))
    try:
        raw = Path(path).read_text()
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc}") from None
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return parse_circuit_document(data)


def _pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def circuit_to_document(doc: CircuitDocument | Circuit) -> dict:
    if isinstance(doc, Circuit):
        doc = CircuitDocument(doc)
    c = doc.circuit
    out: dict[str, Any] = {
        "description": doc.description or ORDERING_NOTE,
        "dim": c.dim,
        "hamiltonians": [
            {"label": g.label, "matrix": [[_pair(z) for z in row] for row in g.hamiltonian]} for g in c.gates
        ],
    }
    if doc.initial_state is not None:
        out["initial_state"] = [_pair(z) for z in doc.initial_state]
    if doc.reference:
        out["reference"] = doc.reference
    return out


def _sig9(x: float) -> float:
    return float(f"{x:.9g}")


def format_numbers(obj):
    """Round every float to 9 significant digits; reject non-finite values."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, int)):
        return obj
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            raise ValueError(f"non-finite number in report: {x}")
        return _sig9(x)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, dict):
        return {k: format_numbers(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [format_numbers(v) for v in obj]
    raise TypeError(f"cannot serialise {type(obj).__name__}")


@dataclass
class ReportDocument:
    inputs: dict[str, Any]
    bounds: list[dict] = field(default_factory=list)
    h0: dict | None = None
    verification: dict | None = None
    epsilon_max: float | str | None = None
    warnings: list[str] = field(default_factory=list)
    extra: dict[str, Any] = field(default_factory=dict)

    def as_dict(self) -> dict:
        out: dict[str, Any] = {"inputs": self.inputs}
        if self.bounds:
            out["bounds"] = self.bounds
        if self.h0 is not None:
            out["h0"] = self.h0
        if self.verification is not None:
            out["verification"] = self.verification
        if self.epsilon_max is not None:
            out["epsilon_max"] = self.epsilon_max
        out.update(self.extra)
        out["warnings"] = list(self.warnings)
        return format_numbers(out)

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2)
