"""
qgroup-monodromy – exact verification of the quantum monodromy matrix relations
=============================================================================
Runs the registered identity checks and writes a json or text report.

Run ➜  pip install -e .
        qgroup-monodromy --n 2 --n 3 --format text
        QGM_CHECKS=qybe,braid qgroup-monodromy --out report.json

Exit status: 0 when no check fails, 1 on any failure, 2 on a configuration error.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import List, Optional

from dotenv import load_dotenv

from .errors import ConfigError
from .framework import CheckStatus, ReportLogger, generate_summary_report, setup_logger
from .harness import CHECK_NAMES, CheckConfig, render_report, run_checks

# ── Configuration ────────────────────────────────────────────────────────────
# Load environment variables from a .env file if present; CheckConfig.from_env
# reads the QGM_* defaults, command-line flags override them.
load_dotenv()

logger = logging.getLogger("qgroup_monodromy.main")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qgroup-monodromy",
        description="Verify R-matrix, Hopf and determinant identities of the quantum monodromy matrix.",
    )
    parser.add_argument("--n", dest="n_values", type=int, action="append",
                        help="rank n (repeatable; default QGM_N_VALUES or 2,3)")
    parser.add_argument("--check", dest="checks", action="append", metavar="NAME",
                        help=f"check to run (repeatable; default all): {', '.join(CHECK_NAMES)}")
    parser.add_argument("--backend", choices=("exact", "numeric"), help="judging backend")
    parser.add_argument("--h", dest="numeric_h", type=int, help="root of unity order for the numeric backend")
    parser.add_argument("--rep-degree", dest="rep_degree", type=int, help="highest tensor power of the fundamental")
    parser.add_argument("--workers", type=int, help="worker processes")
    parser.add_argument("--format", dest="fmt", choices=("json", "text"), default="json")
    parser.add_argument("--out", type=Path, help="write the report here instead of stdout")
    parser.add_argument("--timings", action="store_true", help="include wall_time in the report")
    parser.add_argument("--debug", action="store_true", help="log at DEBUG level")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    debug = args.debug or os.getenv("QGM_DEBUG", "0") not in ("", "0", "false")
    setup_logger(debug)

    try:
        cfg = CheckConfig.from_env(
            n_values=tuple(args.n_values) if args.n_values else None,
            checks=tuple(args.checks) if args.checks else None,
            backend=args.backend,
            numeric_h=args.numeric_h,
            rep_degree=args.rep_degree,
            workers=args.workers,
            include_timings=True if args.timings else None,
        ).validate()
    except ConfigError as exc:
        logger.error("invalid configuration: %s", exc)
        print(f"qgroup-monodromy: error: {exc}", file=sys.stderr)
        return 2

    report_logger = ReportLogger()
    entries = run_checks(cfg, report_logger)
    summary = generate_summary_report(report_logger.summarize())
    logger.info("\n%s", summary)

    payload = render_report(entries, args.fmt, cfg.include_timings)
    if args.fmt == "text":
        payload += f"\n{summary}\n".encode("utf-8")
    if args.out:
        args.out.write_bytes(payload)
    else:
        sys.stdout.buffer.write(payload)
        sys.stdout.flush()

    return 1 if any(e.status is CheckStatus.FAIL for e in entries) else 0


def cli() -> None:
    sys.exit(main())


if __name__ == "__main__":
    cli()
