"""
Command-line front end.

Usage::

    qmexchange run scenarios/optimal.json [--out-dir DIR] [--t-final X] [--dt X]
    qmexchange validate scenarios/optimal.json
    qmexchange list-scenarios

Flags override the values in the file.  The process exit status is the
only failure channel: 0 success, 1 parse error, 2 validation error,
3 numerical guard, 4 infeasible regime, 5 output failure.  The summary
table goes to stdout after a successful run; logs go to stderr and to the
daily log file.
"""
import argparse
import sys
from pathlib import Path
from typing import List, Optional

from loguru import logger

from qmexchange.analysis.exporter import format_summary
from qmexchange.errors import OutputError, QMExchangeError
from qmexchange.pipeline import run_scenario
from qmexchange.scenarios.factory import ScenarioFactory
from qmexchange.utils.config_loader import parse_config
from qmexchange.utils.logger import archive_current_log, setup_logger


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qmexchange",
        description="Continuous-measurement information exchange simulator",
    )
    parser.add_argument(
        "--log-dir", type=str, default="logs",
        help="Directory for the daily log file",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="Run a scenario and write CSV + JSON outputs")
    run.add_argument("config", type=str, help="Path to the scenario JSON file")
    run.add_argument("--out-dir", type=str, default=None, help="Output directory")
    run.add_argument("--t-final", type=float, default=None, help="Override the horizon")
    run.add_argument("--dt", type=float, default=None, help="Override the RK4 step")

    validate = sub.add_parser("validate", help="Parse and validate a scenario file")
    validate.add_argument("config", type=str, help="Path to the scenario JSON file")

    sub.add_parser("list-scenarios", help="Show the scenario registry")
    return parser


def _cmd_run(args: argparse.Namespace) -> int:
    config = parse_config(
        args.config,
        overrides={"t_final": args.t_final, "dt": args.dt, "out_dir": args.out_dir},
    )
    out_dir = Path(config.output_dir)
    try:
        report = run_scenario(config, out_dir)
    except QMExchangeError:
        if out_dir.exists():
            archive_current_log(out_dir, log_dir=args.log_dir)
        raise

    print(format_summary(report))
    archive_current_log(out_dir, log_dir=args.log_dir)
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    config = parse_config(args.config)
    print(f"{args.config}: valid '{config.scenario}' scenario (n={config.n})")
    return 0


def _cmd_list(args: argparse.Namespace) -> int:
    for cls in ScenarioFactory.list_scenarios():
        required = ", ".join(cls.required) or "-"
        optional = ", ".join(cls.optional) or "-"
        print(f"{cls.name:<15} requires: {required:<28} optional: {optional:<22} {cls.summary}")
    return 0


COMMANDS = {
    "run": _cmd_run,
    "validate": _cmd_validate,
    "list-scenarios": _cmd_list,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Parse *argv*, dispatch the command and map failures to exit codes."""
    args = build_parser().parse_args(argv)
    setup_logger(args.log_dir)

    try:
        return COMMANDS[args.command](args)
    except QMExchangeError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return e.exit_code
    except OSError as e:
        logger.error(f"I/O failure: {e}")
        return OutputError.exit_code
    except Exception as e:
        logger.exception(f"Pipeline failed: {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
