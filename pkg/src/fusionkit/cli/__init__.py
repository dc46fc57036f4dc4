"""Command line: ``fusionkit <command> --spec FILE [options]``.

Exit codes: 0 ok, 1 a mathematical violation was found, 2 input error,
3 an enumeration bound was exceeded.
"""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from ..bounds import BoundExceeded, get_bounds
from .commands import COMMANDS, DUMP_ITEMS, InputError, Options, Report, run_report
from .spec import Block, SpecDocument, SpecError, parse_spec, render

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_BOUND = 0, 1, 2, 3


def _u64(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fusionkit", description="Checks on fusion, transporter and linking systems.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--spec", required=True, help="fixture file in the block format")
    ap.add_argument("--target", help="block to run on when the spec has several candidates")
    ap.add_argument("--family", help="family block selecting the subgroups to examine")
    ap.add_argument("--json", dest="json_out", help="write the JSON report here ('-' for stdout)")
    ap.add_argument("--truncation", type=int, help="simplicial truncation level N")
    ap.add_argument("--seed", type=_u64, default=0)
    ap.add_argument("--threads", type=int, default=1, help="worker threads; results do not depend on it")
    ap.add_argument("--what", action="append", default=[], choices=DUMP_ITEMS, help="dump item (repeatable)")
    ap.add_argument("--out", help="directory for dump files")
    ap.add_argument("--quiet", action="store_true", help="suppress the table on stdout")
    return ap


def run(argv: Optional[List[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_INPUT
    try:
        get_bounds()
        with open(args.spec, encoding="utf-8") as fh:
            text = fh.read()
        doc = parse_spec(text, args.spec)
        opts = Options(args.target, args.family, args.truncation, args.seed, max(args.threads, 1),
                       args.what, args.out)
        report = run_report(doc, args.command, opts, text)
    except BoundExceeded as e:
        print(f"fusionkit: bound exceeded: {e}", file=stderr)
        return EXIT_BOUND
    except (SpecError, InputError, OSError, ValueError, KeyError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else e
        print(f"fusionkit: {msg}", file=stderr)
        return EXIT_INPUT
    if args.json_out == "-":
        stdout.write(report.to_json())
    else:
        if args.json_out:
            with open(args.json_out, "w", encoding="utf-8") as fh:
                fh.write(report.to_json())
        if not args.quiet:
            stdout.write(report.render_table())
    return EXIT_OK if report.ok else EXIT_VIOLATION


def main() -> None:
    sys.exit(run())


__all__ = ["Block", "SpecDocument", "SpecError", "parse_spec", "render", "run_report", "Report", "Options",
           "InputError", "run", "main", "build_parser"]
