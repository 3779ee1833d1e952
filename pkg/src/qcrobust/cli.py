"""Command-line front end.

Circuit files list Hamiltonians in left-to-right product order: the output state
is ``exp(-i H1) ... exp(-i HN) psi0``, so the LAST entry acts on the state FIRST.
Use ``builtin:example1`` / ``builtin:example2`` / ``builtin:example2-corrected``
in place of a path for the bundled demos.

Exit codes: 0 success, 2 validation error, 3 verification violation,
4 numerical-degeneracy fallback exhausted.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys

import numpy as np

from . import __version__
from .bounds import DEFAULT_TOL, Method, all_bounds, epsilon_max
from .circuit import Mode
from .documents import (
    ORDERING_NOTE,
    CircuitDocument,
    DocumentError,
    ReportDocument,
    circuit_to_document,
    format_numbers,
    load_circuit_document,
)
from .h0solver import AppendixCError, H0Method, H0Result, TooManyGates, compute_h0, h0_appendix_c, h0_triangle_upper, h0_vertex_enum
from .matcore import ConvergenceError, MatrixError
from .verify import VerificationConfig, monte_carlo_check

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_VIOLATION = 3
EXIT_DEGENERATE = 4

DEFAULT_FLOOR_TOL = 0.01
DEFAULT_EPSMAX_TOL = 0.05


class _Degenerate(Exception):
    pass


def _methods(name: str) -> list[Method]:
    return list(Method) if name == "all" else [Method(name)]


def _h0_dict(res: H0Result) -> dict:
    out = {"value": res.value, "method": res.method.value, "is_upper_bound_only": res.is_upper_bound_only}
    if res.witness is not None:
        w = res.witness
        out["witness"] = list(w) if isinstance(w, tuple) and all(isinstance(x, int) for x in w) else [str(w[0]), w[1]]
    return out


def _resolve_h0(doc: CircuitDocument, method: str) -> tuple[H0Result, list[str]]:
    try:
        return compute_h0(doc.circuit, None if method == "auto" else method)
    except (AppendixCError, TooManyGates) as exc:
        raise _Degenerate(f"h0 method {method!r} unavailable: {exc}") from None


def _reference_warnings(doc: CircuitDocument, eps_bar: float, floors: dict[str, float]) -> list[str]:
    ref = doc.reference
    published = ref.get("floors")
    if not published or ref.get("eps_bar") is None or abs(float(ref["eps_bar"]) - eps_bar) > 1e-12:
        return []
    tol = float(ref.get("tolerance", DEFAULT_FLOOR_TOL))
    out = []
    for name, want in published.items():
        got = floors.get(name)
        if got is not None and abs(got - float(want)) > tol:
            out.append(f"{name} floor {got:.9g} differs from reference {float(want):.9g} by more than {tol:g}")
    if out and ref.get("note"):
        out.append(f"discrepancy analysis: {ref['note']}")
    return out


def _inputs(args, **extra) -> dict:
    out = {"circuit": str(args.circuit), "ordering": ORDERING_NOTE}
    for key in ("eps_bar", "mode", "method", "tol", "samples", "seed"):
        if hasattr(args, key) and getattr(args, key) is not None:
            out[key] = getattr(args, key)
    out.update(extra)
    return out


def _bounds_for(doc, eps_bar, methods, tol, h0_method, mode) -> tuple[list[dict], dict[str, float], list[str], H0Result | None]:
    warnings: list[str] = []
    h0 = None
    if Method.THEOREM2 in methods:
        h0, w = _resolve_h0(doc, h0_method)
        warnings += w
    if Method.THEOREM1 in methods and Mode(mode) is Mode.PER_GATE:
        warnings.append("thm1 assumes one common error on every gate; its floor does not cover per-gate errors")
    reports = all_bounds(doc.circuit, eps_bar, methods, tol, h0)
    for r in reports.values():
        if not r.converged:
            warnings.append(f"{r.method.value}: series tail {r.tail_bound:.3e} above tol at order {r.truncation_order}; tail is included in M")
    floors = {m.value: r.fidelity_floor for m, r in reports.items()}
    return [r.as_dict() for r in reports.values()], floors, warnings, h0


def cmd_bound(args) -> tuple[ReportDocument, int]:
    doc = load_circuit_document(args.circuit)
    methods = _methods(args.method)
    rows, floors, warnings, h0 = _bounds_for(doc, args.eps_bar, methods, args.tol, args.h0_method, args.mode)
    warnings += _reference_warnings(doc, args.eps_bar, floors)
    report = ReportDocument(_inputs(args), bounds=rows, h0=_h0_dict(h0) if h0 else None, warnings=warnings)
    return report, EXIT_OK


def cmd_verify(args) -> tuple[ReportDocument, int]:
    doc = load_circuit_document(args.circuit)
    mode = Mode(args.mode)
    methods = [Method.BASELINE, Method.THEOREM2] if mode is Mode.PER_GATE else list(Method)
    rows, floors, warnings, h0 = _bounds_for(doc, args.eps_bar, methods, args.tol, args.h0_method, mode)
    if args.inject_floor is not None:
        floors = {k: args.inject_floor for k in floors}
        warnings.append(f"floors overridden with {args.inject_floor:g} (harness self-test)")
    cfg = VerificationConfig(args.samples, args.seed, args.eps_bar, mode)
    ver = monte_carlo_check(doc.circuit, cfg, floors, doc.initial_state)
    if ver.violations:
        warnings.append(f"{ver.violations} of {ver.samples} samples fell below a floor")
    report = ReportDocument(
        _inputs(args), bounds=rows, h0=_h0_dict(h0) if h0 else None, verification=ver.as_dict(), warnings=warnings
    )
    return report, EXIT_VIOLATION if ver.violations else EXIT_OK


def cmd_epsmax(args) -> tuple[ReportDocument, int]:
    doc = load_circuit_document(args.circuit)
    h0, warnings = _resolve_h0(doc, args.h0_method)
    root = epsilon_max(doc.circuit, tol=args.tol, h0=h0)
    value = "unbounded" if root is None else root
    ref = doc.reference.get("epsilon_max")
    if root is not None and ref is not None:
        tol = float(doc.reference.get("epsilon_max_tolerance", DEFAULT_EPSMAX_TOL))
        if abs(root - float(ref)) > tol:
            warnings.append(f"epsilon_max {root:.9g} differs from reference {float(ref):.9g} by more than {tol:g}")
        elif abs(root - float(ref)) > 1e-3:
            warnings.append(
                f"epsilon_max {root:.9g} differs from reference {float(ref):.9g} by {abs(root - float(ref)):.3g} "
                f"(within the {tol:g} tolerance)"
            )
    report = ReportDocument(_inputs(args), h0=_h0_dict(h0), epsilon_max=value, warnings=warnings)
    return report, EXIT_OK


def cmd_h0(args) -> tuple[ReportDocument, int]:
    doc = load_circuit_document(args.circuit)
    if args.method != "cross-check":
        res, warnings = _resolve_h0(doc, args.method)
        return ReportDocument(_inputs(args), h0=_h0_dict(res), warnings=warnings), EXIT_OK
    from .bounds import conjugated_generators

    c = doc.circuit
    mats = conjugated_generators(c).a
    warnings: list[str] = []
    routes = []
    try:
        routes.append(h0_vertex_enum(mats))
    except TooManyGates as exc:
        warnings.append(str(exc))
    if len(mats) == 2 and c.dim == 2:
        try:
            routes.append(h0_appendix_c(mats[0], mats[1]))
        except AppendixCError as exc:
            warnings.append(f"closed form not applicable: {exc}")
    routes.append(h0_triangle_upper(c))
    exact = [r.value for r in routes if not r.is_upper_bound_only]
    if len(exact) > 1 and max(exact) - min(exact) > 1e-8:
        warnings.append(f"exact h0 routes disagree by {max(exact) - min(exact):.3e}")
    best = routes[0]
    report = ReportDocument(
        _inputs(args), h0=_h0_dict(best), warnings=warnings, extra={"cross_check": [_h0_dict(r) for r in routes]}
    )
    return report, EXIT_OK


def cmd_sweep(args) -> tuple[ReportDocument, int]:
    doc = load_circuit_document(args.circuit)
    if args.points < 2:
        raise ValueError("--points must be at least 2")
    if args.eps_max <= 0:
        raise ValueError("--eps-max must be positive")
    h0, warnings = _resolve_h0(doc, args.h0_method)
    grid = np.linspace(0.0, args.eps_max, args.points)
    rows = []
    for e in grid:
        reports = all_bounds(doc.circuit, float(e), list(Method), args.tol, h0)
        rows.append([float(e)] + [reports[m].fidelity_floor for m in Method])
    header = ["eps_bar", "floor_baseline", "floor_thm1", "floor_thm2"]
    if args.emit == "csv":
        if not args.output:
            raise ValueError("--emit csv needs --output <file>")
        with open(args.output, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(header)
            for row in format_numbers(rows):
                w.writerow([f"{x:.9g}" for x in row])
    extra = {"sweep": [dict(zip(header, row)) for row in rows]}
    if args.emit == "csv":
        extra = {"csv": args.output, "rows": len(rows)}
    return ReportDocument(_inputs(args, eps_max=args.eps_max, points=args.points), h0=_h0_dict(h0), warnings=warnings, extra=extra), EXIT_OK


def cmd_example(args) -> tuple[dict, int]:
    return circuit_to_document(load_circuit_document(f"builtin:{args.name}")), EXIT_OK


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _nonneg_float(text: str) -> float:
    v = float(text)
    if not np.isfinite(v) or v < 0:
        raise argparse.ArgumentTypeError("must be a finite non-negative number")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="qcrobust",
        description="Certified fidelity floors for coherently over/under-rotated circuits. " + ORDERING_NOTE + ".",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, eps=True):
        sp.add_argument("--circuit", required=True, help="circuit JSON path or builtin:<name>")
        if eps:
            sp.add_argument("--eps-bar", type=_nonneg_float, required=True)
        sp.add_argument("--tol", type=_nonneg_float, default=None)
        sp.add_argument(
            "--h0-method", choices=["auto", "vertex", "appendix-c", "triangle"], default="auto",
            help="route for h0 in the per-gate bound",
        )

    b = sub.add_parser("bound", help="fidelity floors at one eps_bar")
    common(b)
    b.add_argument("--method", choices=["baseline", "thm1", "thm2", "all"], default="all")
    b.add_argument("--mode", choices=[m.value for m in Mode], default="uniform")
    b.add_argument("--emit", choices=["json", "csv"], default="json")
    b.set_defaults(func=cmd_bound)

    v = sub.add_parser("verify", help="Monte Carlo check of the floors")
    common(v)
    v.add_argument("--mode", choices=[m.value for m in Mode], default="per-gate")
    v.add_argument("--samples", type=_positive_int, default=10_000)
    v.add_argument("--seed", type=int, default=42)
    v.add_argument("--inject-floor", type=float, default=None, help=argparse.SUPPRESS)
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("epsmax", help="crossover eps_bar between the per-gate and baseline bounds")
    common(e, eps=False)
    e.set_defaults(func=cmd_epsmax)

    h = sub.add_parser("h0", help="maximal norm of signed conjugated-generator sums")
    h.add_argument("--circuit", required=True)
    h.add_argument("--method", choices=["auto", "vertex", "appendix-c", "triangle", "cross-check"], default="auto")
    h.set_defaults(func=cmd_h0)

    s = sub.add_parser("sweep", help="floors over an eps_bar grid")
    common(s, eps=False)
    s.add_argument("--eps-max", type=_nonneg_float, required=True)
    s.add_argument("--points", type=int, default=51)
    s.add_argument("--emit", choices=["json", "csv"], default="json")
    s.add_argument("--output", help="CSV destination for --emit csv")
    s.set_defaults(func=cmd_sweep)

    x = sub.add_parser("example", help="print a bundled circuit document")
    x.add_argument("name", choices=["example1", "example2", "example2-corrected"])
    x.set_defaults(func=cmd_example)
    return p


def _emit_bound_csv(report: ReportDocument, out) -> None:
    w = csv.writer(out)
    w.writerow(["method", "eps_bar", "m_value", "fidelity_floor"])
    for row in report.as_dict()["bounds"]:
        w.writerow([row["method"], f"{row['eps_bar']:.9g}", f"{row['m_value']:.9g}", f"{row['fidelity_floor']:.9g}"])


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "tol", "absent") is None:
        args.tol = 1e-10 if args.command == "epsmax" else DEFAULT_TOL
    try:
        report, code = args.func(args)
    except _Degenerate as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (DocumentError, MatrixError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    if isinstance(report, dict):
        out.write(json.dumps(report, indent=2) + "\n")
    elif getattr(args, "emit", "json") == "csv" and args.command == "bound":
        _emit_bound_csv(report, out)
    else:
        out.write(report.to_json() + "\n")
    for w in getattr(report, "warnings", []):
        print(f"warning: {w}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
