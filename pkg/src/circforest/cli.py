"""Command-line interface.

Results go to stdout as one JSON object (or CSV rows); diagnostics go to
stderr. Exit codes: 0 ok, 2 invalid input, 3 precision or factorization
failure, 4 internal inconsistency (including a failed selftest).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Any, Optional, Sequence

from mpmath import mp

from .errors import CircForestError, InternalInconsistency, InvalidInput
from .forests import (
    CHEBYSHEV,
    DETERMINANT,
    RESULTANT,
    count,
    counts_by_size,
    validate_spec,
)
from .mahler import (
    asymptotic_constant_by_roots,
    convergence_report,
    growth_polynomial,
    mahler_quadrature,
)
from .polynomial import DEFAULT_BITS
from .selftest import EVEN_N_MAX, ODD_N_MAX, run_selftest
from .structure import verify_square_structure

METHOD_NAMES = {"det": DETERMINANT, "resultant": RESULTANT, "chebyshev": CHEBYSHEV}

CSV_HEADERS = {
    "count": ["n", "value", "method", "residual"],
    "count-range": ["n", "value", "method", "residual"],
    "by-size": ["n", "size", "count"],
    "structure": ["n", "value", "p", "multiplier", "a", "holds"],
    "mahler": ["method", "value", "errorBound"],
    "asymptotics": ["n", "value", "ratio", "nthRoot", "validGraph"],
    "selftest": ["check", "passed", "detail"],
}


def _real(x, bits: int) -> str:
    digits = min(40, max(15, int(bits * 0.30103) - 5))
    return mp.nstr(x, digits, min_fixed=-5, max_fixed=40)


def _bound(x) -> str:
    return mp.nstr(x, 3)


def _steps(text: str) -> list[int]:
    try:
        return [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid step list {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="circforest",
        description="Rooted spanning forests of circulant graphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision-bits", type=int, default=DEFAULT_BITS)
    common.add_argument("--format", choices=("json", "csv"), default="json")

    graph = argparse.ArgumentParser(add_help=False)
    graph.add_argument("--steps", type=_steps, required=True, help="e.g. 1,2")
    graph.add_argument(
        "--half-step",
        action="store_true",
        help="use C_2n(steps, n); --n is then the half order",
    )

    method = argparse.ArgumentParser(add_help=False)
    method.add_argument(
        "--method", choices=("det", "resultant", "chebyshev", "all"), default="all"
    )

    p = sub.add_parser("count", parents=[common, graph, method])
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("count-range", parents=[common, graph, method])
    p.add_argument("--n-from", type=int, required=True)
    p.add_argument("--n-to", type=int, required=True)

    p = sub.add_parser("by-size", parents=[common, graph])
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("structure", parents=[common, graph])
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("mahler", parents=[common, graph])
    p.add_argument("--quad-tol", type=float, default=1e-10)

    p = sub.add_parser("asymptotics", parents=[common, graph])
    p.add_argument("--n-max", type=int, required=True)

    p = sub.add_parser("selftest", parents=[common])
    p.add_argument("--quad-tol", type=float, default=1e-10)
    p.add_argument("--even-n-max", type=int, default=EVEN_N_MAX)
    p.add_argument("--odd-n-max", type=int, default=ODD_N_MAX)
    return parser


def _count_record(spec, method: str, bits: int) -> dict[str, Any]:
    record: dict[str, Any] = {"n": spec.n, "graph": str(spec)}
    if method == "all":
        results = {m: count(spec, m, bits) for m in (DETERMINANT, RESULTANT, CHEBYSHEV)}
        values = {m: r.value for m, r in results.items()}
        if len(set(values.values())) != 1:
            raise InternalInconsistency(f"methods disagree on {spec}: {values}")
        record["value"] = str(values[DETERMINANT])
        record["method"] = "all"
        record["values"] = {m: str(v) for m, v in values.items()}
        residual = results[CHEBYSHEV].residual
    else:
        r = count(spec, METHOD_NAMES[method], bits)
        record["value"] = str(r.value)
        record["method"] = r.method
        residual = r.residual
    record["residual"] = None if residual is None else f"{residual:.3e}"
    return record


def execute(args: argparse.Namespace) -> tuple[list[dict], dict]:
    """Dispatch a parsed request; returns (records, summary)."""
    bits = args.precision_bits
    if bits < 64:
        raise InvalidInput("--precision-bits must be at least 64")
    cmd = args.command
    summary: dict[str, Any] = {}

    if cmd == "count":
        spec = validate_spec(args.steps, args.half_step, args.n)
        return [_count_record(spec, args.method, bits)], summary

    if cmd == "count-range":
        if args.n_from > args.n_to:
            raise InvalidInput("--n-from must not exceed --n-to")
        records, skipped = [], []
        for n in range(args.n_from, args.n_to + 1):
            try:
                spec = validate_spec(args.steps, args.half_step, n)
            except InvalidInput:
                skipped.append(n)
                continue
            records.append(_count_record(spec, args.method, bits))
        summary["skipped"] = skipped
        return records, summary

    if cmd == "by-size":
        spec = validate_spec(args.steps, args.half_step, args.n)
        sizes = counts_by_size(spec)
        summary["total"] = str(sum(sizes))
        return [
            {"n": spec.n, "size": k, "count": str(c)} for k, c in enumerate(sizes, 1)
        ], summary

    if cmd == "structure":
        spec = validate_spec(args.steps, args.half_step, args.n)
        f = count(spec, RESULTANT).value
        s = verify_square_structure(spec, f)
        return [
            {
                "n": spec.n,
                "graph": str(spec),
                "value": str(f),
                "p": s.odd_step_count,
                "multiplier": s.predicted_multiplier,
                "a": str(s.extracted_root),
                "holds": s.holds,
            }
        ], summary

    if cmd == "mahler":
        spec = validate_spec(args.steps, args.half_step, 2 * args.steps[-1] + 1)
        roots = asymptotic_constant_by_roots(spec, bits)
        quad = mahler_quadrature(growth_polynomial(spec), args.quad_tol)
        summary["agree"] = roots.agrees_with(quad)
        if not summary["agree"]:
            raise InternalInconsistency("Mahler estimators disagree")
        return [
            {"method": e.method, "value": _real(e.value, bits), "errorBound": _bound(e.error_bound)}
            for e in (roots, quad)
        ], summary

    if cmd == "asymptotics":
        spec = validate_spec(args.steps, args.half_step, 2 * args.steps[-1] + 1)
        report = convergence_report(spec, args.n_max, bits)
        A = report.limit_constant
        summary["limitConstant"] = _real(A.value, bits)
        summary["errorBound"] = _bound(A.error_bound)
        summary["withinTolerance"] = report.within_tolerance
        return [
            {
                "n": row.n,
                "value": str(row.value),
                "ratio": _real(row.ratio, bits),
                "nthRoot": _real(row.nth_root, bits),
                "validGraph": row.valid_graph,
            }
            for row in report.rows
        ], summary

    if cmd == "selftest":
        results = run_selftest(bits, args.quad_tol, args.even_n_max, args.odd_n_max)
        summary["passed"] = sum(r.passed for r in results)
        summary["failed"] = sum(not r.passed for r in results)
        return [
            {"check": r.name, "passed": r.passed, "detail": r.detail} for r in results
        ], summary

    raise InvalidInput(f"unknown command {cmd!r}")


def _request_echo(args: argparse.Namespace) -> dict[str, Any]:
    return {k.replace("_", "-"): v for k, v in sorted(vars(args).items())}


def emit(result: dict[str, Any], fmt: str, command: Optional[str] = None) -> str:
    """Serialize a RunResult deterministically."""
    if fmt == "json":
        return json.dumps(result, indent=2) + "\n"
    header = CSV_HEADERS.get(command or result["request"]["command"], [])
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for rec in result["records"]:
        writer.writerow(["" if rec.get(h) is None else rec.get(h) for h in header])
    return buf.getvalue()


def run(argv: Optional[Sequence[str]] = None) -> tuple[dict[str, Any], int]:
    args = build_parser().parse_args(argv)
    result: dict[str, Any] = {
        "request": _request_echo(args),
        "records": [],
        "summary": {},
        "status": "ok",
        "errorKind": None,
    }
    code = 0
    try:
        records, summary = execute(args)
        result["records"] = records
        result["summary"] = summary
        if args.command == "selftest" and summary["failed"]:
            result["status"] = "error"
            result["errorKind"] = "SelftestFailed"
            code = InternalInconsistency.exit_code
    except CircForestError as exc:
        result["status"] = "error"
        result["errorKind"] = type(exc).__name__
        print(f"circforest: {type(exc).__name__}: {exc}", file=sys.stderr)
        code = exc.exit_code
    return result, code


def main(argv: Optional[Sequence[str]] = None) -> int:
    result, code = run(argv)
    fmt = result["request"]["format"]
    sys.stdout.write(emit(result, fmt, result["request"]["command"]))
    return code


if __name__ == "__main__":
    sys.exit(main())
