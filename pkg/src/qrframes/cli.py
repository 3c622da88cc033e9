"""Command line: ``qrframes run|verify|report``.

Exit codes: 0 all checks pass, 1 a check failed, 2 invalid input,
3 internal error. ``QRFRAMES_SEED`` overrides the default seed of
``verify``; ``QRFRAMES_OUT_DIR`` makes reports land in that directory when
``--out`` is not given.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import traceback
from pathlib import Path

from .errors import QRFError, ValidationError
from .reports import RunReport, emit_report
from .scenarios import load_scenario, run_scenario
from .suite import verify_suite

EXIT_PASS, EXIT_FAIL, EXIT_INVALID, EXIT_INTERNAL = 0, 1, 2, 3


def _write(text: str, out: str | None, default_name: str):
    if out is None and os.environ.get("QRFRAMES_OUT_DIR"):
        out = str(Path(os.environ["QRFRAMES_OUT_DIR"]) / default_name)
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _error_doc(kind: str, message: str) -> str:
    return json.dumps({"error": kind, "message": message}, sort_keys=True) + "\n"


def _emit(report: RunReport, args) -> int:
    text = emit_report(report, args.format, getattr(args, "table", None), args.timings)
    _write(text, args.out, f"{report.scenario}.{args.format}")
    return EXIT_PASS if report.passed else EXIT_FAIL


def cmd_run(args) -> int:
    cfg = load_scenario(args.scenario)
    return _emit(run_scenario(cfg), args)


def cmd_verify(args) -> int:
    seed = args.seed
    if seed is None:
        seed = int(os.environ.get("QRFRAMES_SEED", "42"))
    if args.cases < 1:
        raise ValidationError("--cases must be at least 1")
    return _emit(verify_suite(seed, args.cases), args)


def cmd_report(args) -> int:
    text = Path(args.input).read_text(encoding="utf-8") if args.input else sys.stdin.read()
    try:
        report = RunReport.from_dict(json.loads(text))
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise ValidationError(f"input is not a run report: {exc}") from None
    return _emit(report, args)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qrframes", description="Quantum reference frame scenarios and checks.")
    sub = ap.add_subparsers(dest="command", required=True)

    def output_opts(p, table=False):
        p.add_argument("--format", choices=["json", "csv"], default="json")
        p.add_argument("--out", help="output path ('-' for stdout)")
        p.add_argument("--timings", action="store_true", help="include wall-clock timings (breaks byte-identity)")
        if table:
            p.add_argument("--table", help="emit the named report table as CSV instead of the check rows")

    p = sub.add_parser("run", help="run a scenario file")
    p.add_argument("scenario")
    output_opts(p, table=True)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("verify", help="run every property campaign")
    p.add_argument("--seed", type=int)
    p.add_argument("--cases", type=int, default=100)
    output_opts(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("report", help="re-render a saved JSON report")
    p.add_argument("--input", help="saved JSON report (default: stdin)")
    output_opts(p, table=True)
    p.set_defaults(func=cmd_report)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, QRFError, FileNotFoundError) as exc:
        sys.stdout.write(_error_doc("validation", str(exc)))
        return EXIT_INVALID
    except Exception as exc:  # noqa: BLE001
        sys.stdout.write(_error_doc("internal", f"{type(exc).__name__}: {exc}"))
        traceback.print_exc(file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
