"""k3pencils command line: ``verify <scope>`` and ``report --case <id>``.

Exit status 0 when every entry passes, 1 on any mismatch, 2 on usage or data errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import verify
from .catalog import CatalogError
from .lattice import LatticeError

EXIT_OK, EXIT_MISMATCH, EXIT_ERROR = 0, 1, 2


def format_text(report: verify.Report, only_failures: bool = False) -> str:
    lines = [f"case: {report.case}"]
    width = max((len(e.name) for e in report.entries), default=0)
    for e in report.entries:
        if only_failures and e.passed:
            continue
        mark = "PASS" if e.passed else "FAIL"
        line = f"{mark}  {e.name:<{width}}  {e.computed}"
        if not e.passed:
            line += f"  (expected {e.expected})"
        lines.append(line + f"  [{e.paper_ref}]")
    n_fail = len(report.failures())
    lines.append(f"{len(report.entries) - n_fail} passed, {n_fail} failed")
    return "\n".join(lines) + "\n"


def format_json(report: verify.Report) -> str:
    return json.dumps(report.as_json(), indent=2, ensure_ascii=False, sort_keys=True) + "\n"


def _render(report, fmt: str, only_failures: bool = False) -> str:
    return format_json(report) if fmt == "json" else format_text(report, only_failures)


def cmd_verify(scope: str, fmt: str = "text", catalog: str | None = None, only_failures: bool = False) -> tuple[int, str]:
    report = verify.run_scope(scope, catalog)
    return (EXIT_OK if report.ok else EXIT_MISMATCH), _render(report, fmt, only_failures)


def cmd_report(case: str, fmt: str = "text", catalog: str | None = None) -> tuple[int, str]:
    report = verify.case_report(case, catalog)
    return (EXIT_OK if report.ok else EXIT_MISMATCH), _render(report, fmt)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="k3pencils", description="Exact checks for the G6/G8/G12 K3 pencils.")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a check suite")
    v.add_argument("scope", choices=verify.SCOPES + ("all",))
    v.add_argument("--format", choices=("text", "json"), default="text")
    v.add_argument("--catalog", default=None, help="directory with case files (default: bundled data)")
    v.add_argument("--failures", action="store_true", help="list failing entries only")

    r = sub.add_parser("report", help="tables for one case, e.g. 12,3 or 8,generic")
    r.add_argument("--case", required=True)
    r.add_argument("--format", choices=("text", "json"), default="text")
    r.add_argument("--catalog", default=None, help="directory with case files (default: bundled data)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    try:
        if args.command == "verify":
            status, out = cmd_verify(args.scope, args.format, args.catalog, args.failures)
        else:
            status, out = cmd_report(args.case, args.format, args.catalog)
    except (CatalogError, LatticeError, OSError) as exc:
        print(f"k3pencils: {exc}", file=sys.stderr)
        return EXIT_ERROR
    sys.stdout.write(out)
    if status:
        print("k3pencils: mismatches found", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
