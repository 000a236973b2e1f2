"""Command-line front end.

Reads system documents from JSON, dispatches to the library, and emits
machine-readable JSON reports. Complex entries are encoded as [re, im] pairs
(unambiguous and locale-free); reports embed the effective configuration
verbatim so every verdict is auditable, and with --no-timings two runs with
identical inputs and seed produce byte-identical output.

Document schema (informal):

    {
      "name": "plant",
      "A": [[[re, im], ...], ...],      # n x n
      "B": ..., "C": ..., "D": ...,
      "candidates": {"H1": [[[re, im], ...], ...], ...}   # optional, n x n
    }

Input files for `simulate` carry {"x0": [[re, im], ...], "inputs":
[[[re, im], ...], ...]}.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import errors as err
from .boundary import circle_profile, is_coinner, is_inner, uniqueness_certificate
from .linops import Loewner
from .riccati import membership
from .solver import (
    SolverConfig,
    duality_check,
    maximal_solution,
    minimal_solution,
    solve_re,
    solve_re_scalar,
)
from .systems import (
    SystemRealization,
    dissipation_check,
    is_minimal,
    is_passive,
    schur_class_margin,
    simulate,
)

__all__ = ["SystemDocument", "parse_system", "write_system", "run", "main", "EXIT_CODES"]

# one exit code per error category
EXIT_CODES: dict[type, int] = {
    err.ParseError: 2,
    err.DimensionMismatch: 3,
    err.NotHermitian: 4,
    err.NotPSD: 5,
    err.NotPD: 6,
    err.NotNonneg: 7,
    err.RangeViolation: 8,
    err.SingularResolvent: 9,
    err.PoleOnCircle: 10,
    err.DeltaNotPSD: 11,
    err.C3Violation: 12,
    err.InconsistentRoutes: 13,
    err.NotInRI: 14,
    err.NotScalar: 15,
    err.NotMinimal: 16,
    err.NoConvergence: 17,
    err.IterationDiverged: 18,
    err.CertificateFailed: 19,
}
GENERIC_ERROR_EXIT = 1

COMMANDS = ("analyze", "check", "solve-re", "extremes", "simulate", "report")


@dataclass
class SystemDocument:
    """A named realization plus optional named Hermitian candidates."""

    name: str
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray
    candidates: dict[str, np.ndarray] = field(default_factory=dict)

    def realization(self) -> SystemRealization:
        return SystemRealization(a=self.a, b=self.b, c=self.c, d=self.d)


def _decode_entry(obj, where: str) -> complex:
    if (
        not isinstance(obj, (list, tuple))
        or len(obj) != 2
        or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj)
    ):
        raise err.ParseError(f"{where}: entry must be a [re, im] pair, got {obj!r}")
    return complex(float(obj[0]), float(obj[1]))


def _decode_matrix(obj, where: str) -> np.ndarray:
    if not isinstance(obj, list) or not obj:
        raise err.ParseError(f"{where}: expected a non-empty list of rows")
    rows = []
    width = None
    for i, row in enumerate(obj):
        if not isinstance(row, list) or not row:
            raise err.ParseError(f"{where}[{i}]: expected a non-empty row")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise err.ParseError(
                f"{where}[{i}]: row length {len(row)} differs from {width}"
            )
        rows.append([_decode_entry(e, f"{where}[{i}][{j}]") for j, e in enumerate(row)])
    return np.array(rows, dtype=complex)


def _encode_matrix(a: np.ndarray) -> list:
    a = np.atleast_2d(np.asarray(a, dtype=complex))
    return [[[float(z.real), float(z.imag)] for z in row] for row in a]


def _encode_vector(v: np.ndarray) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(v, dtype=complex)]


def parse_system(path: str) -> SystemDocument:
    """Load and validate a system document.

    Raises ParseError for malformed JSON or entries and DimensionMismatch for
    inconsistent shapes.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except FileNotFoundError as exc:
        raise err.ParseError(f"system file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise err.ParseError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}"
        ) from exc
    return document_from_dict(raw, origin=path)


def document_from_dict(raw: dict, origin: str = "<memory>") -> SystemDocument:
    if not isinstance(raw, dict):
        raise err.ParseError(f"{origin}: top level must be an object")
    for key in ("A", "B", "C", "D"):
        if key not in raw:
            raise err.ParseError(f"{origin}: missing required matrix {key!r}")
    a = _decode_matrix(raw["A"], "A")
    b = _decode_matrix(raw["B"], "B")
    c = _decode_matrix(raw["C"], "C")
    d = _decode_matrix(raw["D"], "D")
    name = raw.get("name", "system")
    if not isinstance(name, str):
        raise err.ParseError(f"{origin}: name must be a string")
    candidates: dict[str, np.ndarray] = {}
    if "candidates" in raw:
        if not isinstance(raw["candidates"], dict):
            raise err.ParseError(f"{origin}: candidates must be an object")
        for cname, cobj in raw["candidates"].items():
            mat = _decode_matrix(cobj, f"candidates[{cname!r}]")
            if mat.shape != (a.shape[0], a.shape[0]):
                raise err.DimensionMismatch(
                    f"candidate {cname!r} has shape {mat.shape}, expected "
                    f"{(a.shape[0], a.shape[0])}"
                )
            candidates[cname] = mat
    doc = SystemDocument(name=name, a=a, b=b, c=c, d=d, candidates=candidates)
    doc.realization()  # validates dimensions
    return doc


def write_system(doc: SystemDocument) -> dict:
    """Serialize a document back to its JSON form (bit-exact round trip)."""
    out = {
        "name": doc.name,
        "A": _encode_matrix(doc.a),
        "B": _encode_matrix(doc.b),
        "C": _encode_matrix(doc.c),
        "D": _encode_matrix(doc.d),
    }
    if doc.candidates:
        out["candidates"] = {k: _encode_matrix(v) for k, v in doc.candidates.items()}
    return out


# -- report builders ----------------------------------------------------------


def _loewner_str(value: Loewner) -> str:
    return value.value


def _membership_payload(sigma, h, tol) -> dict:
    verdict = membership(sigma, h, tol=tol, eq_tol=10.0 * tol, c3_tol=10.0 * tol)
    diag = verdict.diagnostics
    return {
        "in_ri": verdict.in_ri,
        "in_re": verdict.in_re,
        "in_ri_circ": verdict.in_ri_circ,
        "diagnostics": {
            "delta_min_eig": diag.delta_min_eig,
            "surplus_min_eig": diag.surplus_min_eig,
            "equality_residual": diag.equality_residual,
            "lmi_min_eig": diag.lmi_min_eig,
            "c3_residual": diag.c3_residual,
            "sigma_h_minimal": diag.sigma_h_minimal,
            "boundary_case": diag.boundary_case,
        },
    }


def _analyze_payload(sigma, tol, grid, config) -> dict:
    minimality = is_minimal(sigma)
    passivity = is_passive(sigma, tol=tol)
    margin = schur_class_margin(sigma, grid_steps=48, radius=0.999)
    out = {
        "minimality": {
            "minimal": minimality.minimal,
            "controllable_dim": minimality.controllable_dim,
            "unobservable_dim": minimality.unobservable_dim,
            "state_dim": minimality.state_dim,
        },
        "passivity": {
            "passive": passivity.passive,
            "margin": passivity.margin,
            "system_norm": passivity.system_norm,
        },
        "schur_margin": {"value": margin, "radius": 0.999, "grid_steps": 48},
    }
    try:
        profile = circle_profile(sigma, grid_steps=grid)
    except err.PoleOnCircle as exc:
        out["circle"] = {"error": "PoleOnCircle", "angle": exc.angle}
        out["uniqueness"] = {"skipped": "transfer function has a pole on the circle"}
        return out
    inner_tol = 10.0 * tol
    out["circle"] = {
        "grid_steps": grid,
        "max_defect_right": profile.max_defect_right,
        "max_defect_left": profile.max_defect_left,
        "inner": is_inner(profile, inner_tol),
        "coinner": is_coinner(profile, inner_tol),
    }
    if minimality.minimal:
        cert = uniqueness_certificate(sigma, profile, tol=inner_tol, config=config)
        out["uniqueness"] = {
            "verdict": cert.verdict.value,
            "reason": cert.reason.value,
            "delta_at_solution": cert.delta_at_solution,
        }
    else:
        out["uniqueness"] = {"skipped": "system is not minimal"}
    return out


def _solution_set_payload(solution_set) -> dict:
    return {
        "members": [_encode_matrix(m.matrix) for m in solution_set.members],
        "comparisons": {
            f"{i},{j}": _loewner_str(v)
            for (i, j), v in sorted(solution_set.comparisons.items())
        },
        "minimal_index": solution_set.minimal_index,
        "maximal_index": solution_set.maximal_index,
        "provenance": solution_set.provenance,
    }


def _solve_re_payload(sigma, config) -> dict:
    scalar = (
        sigma.state_dim == 1 and sigma.input_dim == 1 and sigma.output_dim == 1
    )
    solution_set = solve_re_scalar(sigma) if scalar else solve_re(sigma, config)
    payload = _solution_set_payload(solution_set)
    payload["route"] = "scalar-closed-form" if scalar else "newton-multistart"
    return payload


def _extremes_payload(sigma, config) -> dict:
    h_min = minimal_solution(sigma, config)
    h_max = maximal_solution(sigma, config)
    duality = duality_check(sigma, config)
    return {
        "minimal": _encode_matrix(h_min.matrix),
        "maximal": _encode_matrix(h_max.matrix),
        "duality": {
            "sample_count": duality.sample_count,
            "samples_ok": duality.samples_ok,
            "failure_count": duality.failure_count,
            "re_inversion_equal": duality.re_inversion_equal,
            "re_members": [_encode_matrix(m) for m in duality.re_members],
            "re_adjoint_members": [
                _encode_matrix(m) for m in duality.re_adjoint_members
            ],
        },
    }


def _load_inputs(path: str, sigma) -> tuple[np.ndarray, np.ndarray]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except FileNotFoundError as exc:
        raise err.ParseError(f"input file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise err.ParseError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}"
        ) from exc
    if not isinstance(raw, dict) or "inputs" not in raw:
        raise err.ParseError(f"{path}: expected an object with an 'inputs' field")
    inputs = _decode_matrix(raw["inputs"], "inputs")
    if "x0" in raw:
        x0_mat = _decode_matrix([raw["x0"]], "x0")
        x0 = x0_mat[0]
    else:
        x0 = np.zeros(sigma.state_dim, dtype=complex)
    return x0, inputs


def _simulate_payload(sigma, doc, args) -> dict:
    if not args.inputs:
        raise err.ParseError("simulate requires --inputs <path>")
    x0, inputs = _load_inputs(args.inputs, sigma)
    trajectory = simulate(sigma, x0, inputs)
    payload = {
        "steps": trajectory.steps,
        "states": [_encode_vector(x) for x in trajectory.states],
        "outputs": [_encode_vector(y) for y in trajectory.outputs],
    }
    if args.candidate:
        h = _candidate_matrix(doc, args.candidate)
        margins = dissipation_check(trajectory, h, tol=args.tol)
        payload["dissipation"] = {
            "candidate": args.candidate,
            "margins": [float(v) for v in margins],
            "min_margin": float(margins.min()) if margins.size else 0.0,
        }
    return payload


def _candidate_matrix(doc: SystemDocument, name: str) -> np.ndarray:
    if name not in doc.candidates:
        raise err.ParseError(
            f"candidate {name!r} not found; document defines "
            f"{sorted(doc.candidates)}"
        )
    return doc.candidates[name]


def run(command: str, doc: SystemDocument, args) -> dict:
    """Dispatch one command against a parsed document and return the report."""
    sigma = doc.realization()
    config = SolverConfig(seed=args.seed, membership_tol=args.tol)
    report: dict = {
        "name": doc.name,
        "command": command,
        "config": {
            "tol": args.tol,
            "grid": args.grid,
            "seed": args.seed,
            "eq_tol": 10.0 * args.tol,
            "c3_tol": 10.0 * args.tol,
        },
    }
    if command in ("solve-re", "extremes", "report"):
        report["config"]["solver"] = dict(vars(config))
    timings: dict[str, float] = {}

    def timed(key: str, fn):
        start = time.perf_counter()
        value = fn()
        timings[key] = time.perf_counter() - start
        return value

    if command == "analyze":
        report["analyze"] = timed(
            "analyze", lambda: _analyze_payload(sigma, args.tol, args.grid, config)
        )
    elif command == "check":
        if not args.candidate:
            raise err.ParseError("check requires --candidate <name>")
        h = _candidate_matrix(doc, args.candidate)
        report["check"] = timed(
            "check",
            lambda: {
                "candidate": args.candidate,
                **_membership_payload(sigma, h, args.tol),
            },
        )
    elif command == "solve-re":
        report["solve_re"] = timed("solve_re", lambda: _solve_re_payload(sigma, config))
    elif command == "extremes":
        report["extremes"] = timed("extremes", lambda: _extremes_payload(sigma, config))
    elif command == "simulate":
        report["simulate"] = timed(
            "simulate", lambda: _simulate_payload(sigma, doc, args)
        )
    elif command == "report":
        report["analyze"] = timed(
            "analyze", lambda: _analyze_payload(sigma, args.tol, args.grid, config)
        )
        report["solve_re"] = timed("solve_re", lambda: _solve_re_payload(sigma, config))
        report["extremes"] = timed("extremes", lambda: _extremes_payload(sigma, config))
        if doc.candidates:
            report["check"] = timed(
                "check",
                lambda: {
                    name: _membership_payload(sigma, h, args.tol)
                    for name, h in sorted(doc.candidates.items())
                },
            )
        if args.inputs:
            report["simulate"] = timed(
                "simulate", lambda: _simulate_payload(sigma, doc, args)
            )
    else:  # pragma: no cover - argparse restricts choices
        raise err.ParseError(f"unknown command {command!r}")

    if not args.no_timings:
        report["timings"] = timings
    return report


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="riccati-kyp",
        description=(
            "Analyze discrete-time linear systems: Riccati equality/inequality "
            "membership, KYP feasibility, extremal storage operators, and "
            "boundary certificates."
        ),
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--system", required=True, help="path to a system JSON file")
    parser.add_argument("--candidate", default=None, help="name of a candidate weight")
    parser.add_argument("--inputs", default=None, help="input file for simulate")
    parser.add_argument(
        "--tol",
        type=float,
        default=1e-9,
        help="base membership tolerance; derived tolerances scale with it",
    )
    parser.add_argument(
        "--grid", type=int, default=4096, help="circle-profile grid steps"
    )
    parser.add_argument("--seed", type=int, default=0, help="solver RNG seed")
    parser.add_argument("--out", default=None, help="write the report to this path")
    parser.add_argument(
        "--no-timings",
        action="store_true",
        help="omit wall-clock timings (makes reports byte-reproducible)",
    )
    return parser


def _emit(payload: dict, out_path: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        doc = parse_system(args.system)
        report = run(args.command, doc, args)
    except (err.RiccatiKypError, ValueError) as exc:
        code = EXIT_CODES.get(type(exc), GENERIC_ERROR_EXIT)
        _emit(
            {
                "error": {
                    "category": type(exc).__name__,
                    "exit_code": code,
                    "message": str(exc),
                }
            },
            args.out,
        )
        return code
    _emit(report, args.out)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
