import argparse
import inspect
import io
import logging
import os
import sys
import traceback
from pathlib import Path
from typing import Any, Optional, Sequence

from omegaconf.errors import OmegaConfBaseException

from locus._internal.jobs import (
    CERTIFICATE_FILE,
    CERTIFIED_FILE,
    CONFIG_FILE,
    DESCRIPTOR_FILE,
    ORACLE_FILE,
    create_job,
    job_from_descriptor,
    load_descriptor,
    load_job_config,
    make_budget,
)
from locus.core.oracle import parse_pattern, repair_simulation, write_oracle_csv, write_simulation_csv
from locus.core.utils import configure_log, load_log_config, save_config, save_json
from locus.errors import CompactLocusException, ConfigValidationError

log = logging.getLogger(__name__)

MAX_ENUM_ENV = "LOCUS_MAX_ENUM"


def is_under_debugger() -> bool:
    """
    Attempts to detect if running under a debugger
    """
    frames = inspect.stack()
    if len(frames) >= 3:
        filename = frames[-3].filename
        if filename.endswith("/pdb.py"):
            return True
        elif filename.endswith("/pydevd.py"):
            return True

    # unknown debugging will sometimes set sys.trace
    return sys.gettrace() is not None


def _is_env_set(name: str) -> bool:
    return name in os.environ and os.environ[name] == "1"


def run_and_report(func: Any) -> Any:
    try:
        return func()
    except Exception as ex:
        if _is_env_set("LOCUS_FULL_ERROR") or is_under_debugger():
            raise ex
        try:
            if isinstance(ex, CompactLocusException):
                sys.stderr.write(str(ex) + os.linesep)
                if isinstance(ex.__cause__, OmegaConfBaseException):
                    sys.stderr.write(str(ex.__cause__) + os.linesep)
            else:
                traceback.print_exc()
                sys.stderr.write("\nSet the environment variable LOCUS_FULL_ERROR=1 for a complete stack trace.\n")
        except Exception as ex2:
            sys.stderr.write("An error occurred during locus's exception formatting:" + os.linesep + repr(ex2) + os.linesep)
            raise ex
        sys.exit(1)


def resolve_max_enum(flag: Optional[int]) -> Optional[int]:
    """--max-enum, then LOCUS_MAX_ENUM, then the config budget (None means use the config)."""
    if flag is not None:
        return int(flag)
    env = os.environ.get(MAX_ENUM_ENV)
    if env:
        try:
            value = int(env)
        except ValueError:
            raise ConfigValidationError(f"{MAX_ENUM_ENV}={env!r} is not an integer", path=MAX_ENUM_ENV) from None
        if value <= 0:
            raise ConfigValidationError(f"{MAX_ENUM_ENV}={value} must be positive", path=MAX_ENUM_ENV)
        return value
    return None


def _construct(args: argparse.Namespace) -> int:
    cfg = load_job_config(args.config)
    job = create_job(cfg)
    cert = job.construct()
    out = Path(args.out)
    save_json(job.descriptor(), DESCRIPTOR_FILE, out)
    save_json(cert.to_dict(), CERTIFICATE_FILE, out)
    save_config(cfg, CONFIG_FILE, out)
    log.info(f"Wrote {DESCRIPTOR_FILE}, {CERTIFICATE_FILE} and {CONFIG_FILE} to {out}")
    print(cert.summary())
    return 0


def _certify(args: argparse.Namespace) -> int:
    directory = Path(args.input)
    job = job_from_descriptor(load_descriptor(directory))
    budget = make_budget(job.cfg, resolve_max_enum(args.max_enum))
    cert = job.certify(budget)
    save_json(cert.to_dict(), CERTIFIED_FILE, directory)
    with open(directory / ORACLE_FILE, "w", encoding="utf-8", newline="") as f:
        write_oracle_csv(cert.oracles, f)
    print(cert.summary())
    return 1 if cert.refuted else 0


def _simulate(args: argparse.Namespace) -> int:
    job = job_from_descriptor(load_descriptor(Path(args.input)))
    budget = make_budget(job.cfg, resolve_max_enum(None))
    rows = repair_simulation(job.repair_target(), parse_pattern(args.pattern), args.trials, args.seed, budget)
    buf = io.StringIO()
    write_simulation_csv(rows, buf)
    if args.out is None:
        sys.stdout.write(buf.getvalue())
        sys.stdout.flush()
    else:
        Path(args.out).write_text(buf.getvalue(), encoding="utf-8")
    return 0


_COMMANDS = {"construct": _construct, "certify": _certify, "simulate": _simulate}


def _run_locus(args: argparse.Namespace) -> int:
    log_config = load_log_config("quiet" if args.quiet else "default")
    configure_log(log_config, args.verbose if args.verbose else False)
    if args.command is None:
        get_args_parser().print_help(sys.stderr)
        return 2
    return _COMMANDS[args.command](args)


def _verbose(value: str) -> Any:
    if value in ("", "true"):
        return True
    names = [v for v in value.split(",") if v]
    return names[0] if len(names) == 1 else names


def get_args_parser() -> argparse.ArgumentParser:
    from .. import __version__

    parser = argparse.ArgumentParser(prog="locus", description="Construct and certify locally recoverable codes")
    parser.add_argument("--version", action="version", help="Show locus's version and exit", version=f"locus {__version__}")
    parser.add_argument(
        "--verbose",
        "-v",
        nargs="?",
        const="true",
        default=None,
        type=_verbose,
        help="Debug logging, for all loggers or a comma separated list of logger names",
    )
    parser.add_argument("--quiet", "-q", action="store_true", help="Only log warnings")
    sub = parser.add_subparsers(dest="command")

    construct = sub.add_parser("construct", help="Build a code from a config and write its descriptor")
    construct.add_argument("--config", required=True, help="Job config (JSON or YAML)")
    construct.add_argument("--out", required=True, help="Output directory")

    certify = sub.add_parser("certify", help="Run the oracles on a constructed code")
    certify.add_argument("--in", dest="input", required=True, help="Directory written by construct")
    certify.add_argument("--max-enum", type=int, default=None, help=f"Enumeration budget, overrides {MAX_ENUM_ENV} and the config")

    simulate = sub.add_parser("simulate", help="Repair simulation, CSV on stdout")
    simulate.add_argument("--in", dest="input", required=True, help="Directory written by construct")
    simulate.add_argument("--pattern", required=True, help="random:E, local, wraparound or positions:a,b,...")
    simulate.add_argument("--seed", type=int, default=0)
    simulate.add_argument("--trials", type=int, default=1)
    simulate.add_argument("--out", default=None, help="Write the CSV here instead of stdout")
    return parser


def get_args(args: Optional[Sequence[str]] = None) -> Any:
    return get_args_parser().parse_args(args=args)

