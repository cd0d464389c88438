"""Command-line interface: single-state reports and invariant-grid scans.

Exit codes: 0 success, 2 parse error, 3 unphysical input, 4 optimizer
budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from .bounds import BoundReport, bound_report
from .entanglement import LN2
from .errors import (
    DegenerateInvariantsError,
    DomainError,
    NonPhysicalStateError,
    NonPositiveMatrixError,
    ParseError,
)
from .states import (
    CovMat,
    Invariants,
    _spectrum_from_invariants,
    invariants,
    ppt_eigenvalues,
    standard_form,
    standard_form_from_invariants,
    symplectic_eigenvalues,
)

#: Fixed column order of scan output.
SCAN_COLUMNS = [
    "I1",
    "I2",
    "I3",
    "I4",
    "mu_tilde_minus",
    "entangled",
    "eof_lower_natural",
    "eof_sigma",
    "geof",
    "eeof",
    "eof_upper_natural",
    "physical_upper_flag",
    "status",
]

#: Accepted spellings of the correlated I4 rule used in grid scans.
I4_RULE_STRINGS = {"2|I3|sqrt(I1*I2)", "natural"}

_ENV_SEED = "EOFBOUNDS_SEED"


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, str):
        return x
    return f"{x:.12g}"


def _load_document(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as handle:
            doc = json.load(handle)
    except OSError as exc:
        raise ParseError(f"cannot read input file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("input document must be a JSON object")
    return doc


def _as_float(value, what: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"{what} must be a number, got {value!r}")
    return float(value)


def resolve_state_document(doc: dict) -> CovMat:
    """Build a covariance matrix from one of the three representations."""
    keys = {"matrix", "standard_form", "invariants"} & set(doc)
    if len(keys) != 1:
        raise ParseError(
            "document must contain exactly one of 'matrix', 'standard_form', "
            f"'invariants'; found {sorted(keys) or 'none'}"
        )
    key = keys.pop()
    body = doc[key]
    if key == "matrix":
        try:
            m = np.asarray(body, dtype=float)
        except (TypeError, ValueError) as exc:
            raise ParseError(f"matrix entries must be numeric: {exc}") from exc
        if m.shape != (4, 4):
            raise ParseError(f"matrix must be 4x4 (row-major), got shape {m.shape}")
        return CovMat(m)
    if not isinstance(body, dict):
        raise ParseError(f"'{key}' must be an object")
    if key == "standard_form":
        missing = {"a", "b", "c1", "c2"} - set(body)
        if missing:
            raise ParseError(f"standard_form missing keys: {sorted(missing)}")
        return CovMat.from_standard_form(
            _as_float(body["a"], "a"),
            _as_float(body["b"], "b"),
            _as_float(body["c1"], "c1"),
            _as_float(body["c2"], "c2"),
        )
    body = {str(k).lower(): v for k, v in body.items()}
    missing = {"i1", "i2", "i3", "i4"} - set(body)
    if missing:
        raise ParseError(f"invariants missing keys: {sorted(k.upper() for k in missing)}")
    inv = Invariants(*(_as_float(body[k], k.upper()) for k in ("i1", "i2", "i3", "i4")))
    return standard_form_from_invariants(inv).to_covmat()


def _convert(value: float | None, units: str) -> float | None:
    if value is None or units == "nats":
        return value
    return value / LN2


def _report_dict(report: BoundReport, units: str) -> dict:
    return {
        "lower_natural": _convert(report.lower_natural, units),
        "lower_sigma": _convert(report.lower_sigma, units),
        "upper_natural": _convert(report.upper_natural, units),
        "upper_searched": _convert(report.upper_searched, units),
        "eeof": _convert(report.eeof, units),
        "geof": _convert(report.geof, units),
        "entangled": report.entangled,
        "flags": {
            "orientation": report.flags.orientation,
            "big_side": report.flags.big_side,
            "upper_natural_physical": report.flags.upper_natural_physical,
            "searched_feasible": report.flags.searched_feasible,
            "geof_feasible": report.flags.geof_feasible,
            "geof_budget_exhausted": report.flags.geof_budget_exhausted,
            "hierarchy_ok": report.flags.hierarchy_ok,
            "violations": list(report.flags.violations),
        },
    }


def _write_text(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)


def run_analyze(args: argparse.Namespace) -> int:
    if args.input is None:
        raise ParseError("analyze requires --input PATH")
    doc = _load_document(args.input)
    cm = resolve_state_document(doc)

    sf = standard_form(cm)
    spec = symplectic_eigenvalues(cm, args.tol_psd)
    ppt = ppt_eigenvalues(cm, args.tol_psd)
    report = bound_report(
        cm,
        include_geof=not args.no_geof,
        include_searched=True,
        psd_tol=args.tol_psd,
        bound_tol=args.tol_bound,
        geof_tol=args.geof_tol,
        geof_budget=args.geof_budget,
    )

    inv = invariants(cm)
    out = {
        "units": args.units,
        "invariants": {"I1": inv.i1, "I2": inv.i2, "I3": inv.i3, "I4": inv.i4},
        "standard_form": {"a": sf.a, "b": sf.b, "c1": sf.c1, "c2": sf.c2},
        "symplectic_eigenvalues": {"mu_minus": spec.mu_minus, "mu_plus": spec.mu_plus},
        "ppt_symplectic_eigenvalues": {"mu_minus": ppt.mu_minus, "mu_plus": ppt.mu_plus},
        "entangled": report.entangled,
        "bounds": _report_dict(report, args.units),
    }
    _write_text(args.output, json.dumps(out, indent=2) + "\n")
    return 4 if report.flags.geof_budget_exhausted else 0


def _parse_axis(doc: dict, key: str) -> np.ndarray:
    body = doc.get(key, {"min": 1.0, "max": 4.0, "steps": 40})
    if not isinstance(body, dict):
        raise ParseError(f"'{key}' must be an object with min/max/steps")
    lo = _as_float(body.get("min", 1.0), f"{key}.min")
    hi = _as_float(body.get("max", 4.0), f"{key}.max")
    steps = body.get("steps", 40)
    if isinstance(steps, bool) or not isinstance(steps, int) or steps < 1:
        raise ParseError(f"{key}.steps must be a positive integer")
    if hi < lo:
        raise ParseError(f"{key}: max < min")
    return np.linspace(lo, hi, steps)


def _parse_scan_spec(args: argparse.Namespace) -> dict:
    doc = {str(k).lower(): v for k, v in (
        _load_document(args.input) if args.input else {}
    ).items()}
    unknown = set(doc) - {"i1", "i2", "i3", "i4", "geof"}
    if unknown:
        raise ParseError(f"unknown scan keys: {sorted(unknown)}")
    i4 = doc.get("i4", "2|I3|sqrt(I1*I2)")
    if isinstance(i4, str):
        if i4 not in I4_RULE_STRINGS:
            raise ParseError(
                f"i4 must be a number or one of {sorted(I4_RULE_STRINGS)}, got {i4!r}"
            )
        i4_rule = None
    else:
        i4_rule = _as_float(i4, "i4")
    geof_on = doc.get("geof", True)
    if not isinstance(geof_on, bool):
        raise ParseError("'geof' toggle must be a boolean")
    return {
        "i1": _parse_axis(doc, "i1"),
        "i2": _parse_axis(doc, "i2"),
        "i3": _as_float(doc.get("i3", -0.2), "i3"),
        "i4_literal": i4_rule,
        "geof": geof_on and not args.no_geof,
    }


def _scan_row(i1: float, i2: float, i3: float, i4: float, spec: dict, args) -> tuple[list, bool]:
    """One grid point; returns (row values, budget_exhausted)."""
    row: dict[str, object] = {c: None for c in SCAN_COLUMNS}
    row["I1"], row["I2"], row["I3"], row["I4"] = i1, i2, i3, i4
    try:
        sf = standard_form_from_invariants(Invariants(i1, i2, i3, i4))
    except (DegenerateInvariantsError, DomainError):
        row["status"] = "no_state"
        return [row[c] for c in SCAN_COLUMNS], False
    try:
        row["mu_tilde_minus"] = _spectrum_from_invariants(
            Invariants(i1, i2, i3, i4), ppt=True
        ).mu_minus
    except NonPositiveMatrixError:
        pass
    cm = sf.to_covmat()
    try:
        report = bound_report(
            cm,
            include_geof=spec["geof"],
            include_searched=False,
            psd_tol=args.tol_psd,
            bound_tol=args.tol_bound,
            geof_tol=args.geof_tol,
            geof_budget=args.geof_budget,
        )
    except NonPhysicalStateError:
        row["status"] = "unphysical"
        return [row[c] for c in SCAN_COLUMNS], False
    row["entangled"] = report.entangled
    row["eof_lower_natural"] = _convert(report.lower_natural, args.units)
    row["eof_sigma"] = _convert(report.lower_sigma, args.units)
    row["geof"] = _convert(report.geof, args.units)
    row["eeof"] = _convert(report.eeof, args.units)
    row["eof_upper_natural"] = _convert(report.upper_natural, args.units)
    row["physical_upper_flag"] = report.flags.upper_natural_physical
    row["status"] = "ok"
    return [row[c] for c in SCAN_COLUMNS], report.flags.geof_budget_exhausted


def run_scan(args: argparse.Namespace) -> int:
    spec = _parse_scan_spec(args)
    lines = [",".join(SCAN_COLUMNS)]
    exhausted = False
    for i1 in spec["i1"]:
        for i2 in spec["i2"]:
            i4 = (
                spec["i4_literal"]
                if spec["i4_literal"] is not None
                else 2.0 * abs(spec["i3"]) * math.sqrt(i1 * i2)
            )
            values, hit = _scan_row(float(i1), float(i2), spec["i3"], i4, spec, args)
            exhausted = exhausted or hit
            lines.append(",".join(_fmt(v) for v in values))
    _write_text(args.output, "\n".join(lines) + "\n")
    return 4 if exhausted else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eofbounds",
        description="Entanglement-of-formation bounds for two-mode Gaussian states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    default_seed = int(os.environ.get(_ENV_SEED, "0"))
    for name, func, helptext in (
        ("analyze", run_analyze, "report invariants, spectra and bounds for one state"),
        ("scan", run_scan, "sweep a grid of invariants and emit CSV rows"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--input", help="path to the JSON input document")
        p.add_argument("--output", help="output path (default: stdout)")
        p.add_argument("--tol-psd", type=float, default=1e-10,
                       help="PSD / physicality tolerance (default 1e-10)")
        p.add_argument("--tol-bound", type=float, default=1e-9,
                       help="tolerance for bound comparisons (default 1e-9)")
        p.add_argument("--geof-tol", type=float, default=1e-6,
                       help="convergence tolerance of the geof optimizer")
        p.add_argument("--geof-budget", type=int, default=100_000,
                       help="evaluation budget of the geof optimizer")
        p.add_argument("--seed", type=int, default=default_seed,
                       help="random seed (all algorithms are deterministic; "
                            "reserved for future stochastic features)")
        p.add_argument("--units", choices=("nats", "bits"), default="nats",
                       help="units for entanglement values")
        p.add_argument("--no-geof", action="store_true",
                       help="skip the geof oracle (fast scans)")
        p.set_defaults(func=func)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NonPhysicalStateError, DegenerateInvariantsError, NonPositiveMatrixError,
            DomainError) as exc:
        print(f"error: unphysical input: {exc}", file=sys.stderr)
        return 3


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
