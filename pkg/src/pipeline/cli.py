"""Command-line front-end."""
import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import structlog
from pydantic import ValidationError

from models.errors import ConfigurationError
from pipeline.commands import COMMANDS
from pipeline.config import build_run_config, load_config_file, merge_sections
from pipeline.orchestrator import EXIT_CONFIG, RunOrchestrator
from pipeline.settings import PlapSettings

logger = structlog.get_logger()

RESERVED = {"command", "config", "ode_action", "log_level", "log_format"}


def _float_list(text: str) -> List[float]:
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _name_list(text: str) -> List[str]:
    return [item.strip() for item in text.split(",") if item.strip()]


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="TOML or JSON file; flags override its values")
    parser.add_argument("--output-dir", dest="output_dir", help="Run directory (default $PLAP_OUTPUT_DIR/<command>)")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--progress", action="store_true", default=None, help="Show progress bars")
    parser.add_argument("--log-level", dest="log_level")
    parser.add_argument("--log-format", dest="log_format", choices=("json", "console"))


def _add_limit(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--p", type=float)
    parser.add_argument("--R", type=float)
    parser.add_argument("--n", type=int)
    parser.add_argument("--tol", type=float)
    parser.add_argument("--eps-schedule", dest="eps_schedule", type=_float_list)
    parser.add_argument("--coupling", type=float)
    parser.add_argument("--max-iter", dest="max_iter", type=int)
    parser.add_argument(
        "--free",
        dest="enforce_symmetry",
        action="store_false",
        default=None,
        help="Solve for U and V independently",
    )


def _add_lambda(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--p", type=float)
    parser.add_argument("--alpha", type=float)
    parser.add_argument("--beta", type=float)
    parser.add_argument("--a", type=float)
    parser.add_argument("--b", type=float)
    parser.add_argument("--n", type=int)
    parser.add_argument("--tol", type=float)
    parser.add_argument("--eps-schedule", dest="eps_schedule", type=_float_list)
    parser.add_argument("--max-iter", dest="max_iter", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="p-Laplacian phase-separation profiles")
    sub = parser.add_subparsers(dest="command", required=True)

    limit = sub.add_parser("solve-limit", help="Solve the limit system on [-R, R]")
    _add_common(limit)
    _add_limit(limit)

    single = sub.add_parser("solve-lambda", help="Solve the Λ system at one Λ")
    _add_common(single)
    _add_lambda(single)
    single.add_argument("--Lambda", type=float)

    sweep = sub.add_parser("sweep-lambda", help="Solve over a list of Λ and compare with the limit pair")
    _add_common(sweep)
    _add_lambda(sweep)
    sweep.add_argument("--Lambdas", type=_float_list)
    sweep.add_argument("--window", type=float)
    sweep.add_argument("--rescale-window", dest="rescale_window", type=float)
    sweep.add_argument("--limit-R", dest="limit_R", type=float)
    sweep.add_argument("--limit-n", dest="limit_n", type=int)

    ode = sub.add_parser("ode", help="Initial-value, shooting and Perron solvers")
    actions = ode.add_subparsers(dest="ode_action", required=True)
    ode_solve = actions.add_parser("solve")
    _add_common(ode_solve)
    ode_solve.add_argument("--p", type=float)
    ode_solve.add_argument("--x0", type=float)
    ode_solve.add_argument("--y0", type=float)
    ode_solve.add_argument("--y1", type=float)
    ode_solve.add_argument("--xmax", dest="x_max", type=float)
    ode_solve.add_argument("--step", type=float)
    ode_solve.add_argument("--tol", type=float)
    ode_shoot = actions.add_parser("shoot")
    _add_common(ode_shoot)
    ode_shoot.add_argument("--p", type=float)
    ode_shoot.add_argument("--y1", type=float)
    ode_shoot.add_argument("--x-far", dest="x_far", type=float)
    ode_shoot.add_argument("--step", type=float)
    ode_shoot.add_argument("--tol", type=float)
    ode_perron = actions.add_parser("perron")
    _add_common(ode_perron)
    ode_perron.add_argument("--p", type=float)
    ode_perron.add_argument("--R", type=float)
    ode_perron.add_argument("--n", type=int)
    ode_perron.add_argument("--tol", type=float)
    ode_perron.add_argument("--max-iter", dest="max_iter", type=int)

    certify = sub.add_parser("certify", help="Certify a stored or freshly solved limit pair")
    _add_common(certify)
    _add_limit(certify)
    certify.add_argument("--pair", type=Path, help="pair.csv written by solve-limit")
    certify.add_argument("--checks", type=_name_list, help="Comma-separated subset of checks")
    return parser


def configure_logging(level: str = "INFO", fmt: str = "json") -> None:
    """Structured logs on standard error; standard output carries the run summary."""
    renderer = structlog.dev.ConsoleRenderer() if fmt == "console" else structlog.processors.JSONRenderer()
    structlog.configure(
        processors=[
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.add_log_level,
            renderer,
        ],
        wrapper_class=structlog.make_filtering_bound_logger(logging.getLevelName(level.upper())),
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        cache_logger_on_first_use=False,
    )


def _jsonable(values: Dict[str, Any]) -> Dict[str, Any]:
    return {
        key: value if isinstance(value, (bool, int, float, str, list)) else str(value)
        for key, value in values.items()
    }


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    settings = PlapSettings()
    configure_logging(args.log_level or settings.log_level, args.log_format or settings.log_format)

    flags = {key: value for key, value in vars(args).items() if key not in RESERVED}
    default_output = settings.output_dir / args.command
    merged: Dict[str, Any] = dict(flags)
    try:
        file_data = load_config_file(args.config)
        merged, explicit = merge_sections(file_data, args.command, flags)
        config = build_run_config(
            args.command, merged, default_output, ode_action=getattr(args, "ode_action", None), explicit=explicit
        )
    except (ConfigurationError, ValidationError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        output_dir = Path(merged.get("output_dir") or default_output)
        run = RunOrchestrator(args.command, output_dir, _jsonable({k: v for k, v in merged.items() if v is not None}))
        return run.finish(EXIT_CONFIG, exc)

    logger.info("Command resolved", command=args.command, output_dir=str(config.output_dir))
    code = COMMANDS[args.command](config)
    print(f"{args.command}: exit {code}, output in {config.output_dir}")
    return code
