"""Command line entry point.

    toric-ricci compute --example su2-cp1
    toric-ricci compute --input problem.json --format text
    toric-ricci compute --example toric-p2 --oracle-check --grid 1000000 --tol 1/1000000000000
    toric-ricci catalog --list

Exit status: 0 on success, 2 on a malformed document, 3 when a mathematical
precondition fails (non-Fano bundle, invalid complex structure, ...).
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import documents
from .exceptions import PreconditionError, SchemaError

EXIT_SCHEMA = 2
EXIT_PRECONDITION = 3


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="toric-ricci",
                                description="Greatest Ricci lower bound of Fano homogeneous toric bundles.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", help="answer the query of a problem document")
    src = c.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", type=Path, help="problem document (JSON)")
    src.add_argument("--example", help="catalog entry name")
    c.add_argument("--output", type=Path, help="write the report here instead of stdout")
    c.add_argument("--format", choices=("json", "text"), default="json")
    c.add_argument("--oracle-check", action="store_true",
                   help="also compare against grid integration and bisection")
    c.add_argument("--grid", type=int, default=10**6, help="grid cells for the oracle (default 10^6)")
    c.add_argument("--tol", default="1/1000000000000", help="bisection tolerance as p/q")
    c.add_argument("--timing", action="store_true", help="include wall time (breaks byte reproducibility)")

    k = sub.add_parser("catalog", help="list or print catalog entries")
    k.add_argument("--list", action="store_true", help="list entry names")
    k.add_argument("name", nargs="?", help="print this entry as a problem document")
    return p


def _write(text: str, path: Path | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        path.write_text(text, encoding="utf-8", newline="\n")


def _load(args) -> dict:
    if args.example:
        return documents.catalog(args.example)
    try:
        return json.loads(args.input.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise SchemaError("$", f"invalid JSON: {e}") from None


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "catalog":
            if args.name:
                _write(documents.emit_document(documents.catalog(args.name)), None)
            else:
                _write("".join(f"{n}\n" for n in documents.CATALOG), None)
            return 0
        doc = _load(args)
        report = documents.run(doc, timing=args.timing)
        if args.oracle_check:
            tol = documents.parse_rational(args.tol, "--tol")
            if tol <= 0:
                raise SchemaError("--tol", "must be positive")
            report["oracle_check"] = documents.oracle_check(doc, args.grid, tol)
        if args.format == "json":
            text = documents.emit_report(report)
        else:
            text = documents.render_text(report)
            if "oracle_check" in report:
                text += "oracle check: " + json.dumps(report["oracle_check"], sort_keys=True) + "\n"
        _write(text, args.output)
        if "oracle_check" in report:
            oc = report["oracle_check"]
            if not (oc["integration_ok"] and oc["bisection_ok"]):
                return 1
        return 0
    except SchemaError as e:
        print(f"schema error: {e}", file=sys.stderr)
        return EXIT_SCHEMA
    except PreconditionError as e:
        print(f"precondition failed: {e}", file=sys.stderr)
        if e.witness is not None:
            print(f"witness: {e.witness}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
