import argparse
import logging
from typing import List, Optional

from src.cli.commands import COMMAND_HANDLERS
from src.cli.run_config import COMMANDS, RunConfig
from src.ui import setup_logging
from src.utils import Config
from src.utils.errors import (
    ConfigError,
    DivergentIntegralError,
    SpecValidationError,
    UnstableSystemError,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INVALID = 2
EXIT_UNSTABLE = 3
EXIT_DIVERGENT = 4


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--config", required=True, help="path to the JSON run configuration"
    )
    common.add_argument(
        "--out", default=None, help="output directory (overrides the config)"
    )
    common.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override a dotted config key; repeatable",
    )
    common.add_argument(
        "--strict-stability",
        action="store_true",
        help="fail with exit code 3 when the detector is unstable",
    )
    common.add_argument(
        "--verbose", action="store_true", help="log debug messages"
    )

    parser = argparse.ArgumentParser(
        prog="wlc-sim",
        description=(
            "Frequency-domain simulator for linear quantum detector networks "
            "with coherent feedback."
        ),
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        subparsers.add_parser(command, parents=[common])
    return parser


def load_run(args: argparse.Namespace) -> RunConfig:
    config = Config(args.config)
    for assignment in args.overrides:
        config.apply_override(assignment)
    if args.strict_stability:
        config.apply_override("strict_stability=true")
    if args.out is not None:
        config.apply_override(f"output.directory={args.out}")
    run = RunConfig.from_config(config, command=args.command)
    logger.debug(f"Run configuration: {run.to_dict()}")
    return run


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(logging.DEBUG if args.verbose else logging.INFO)

    try:
        run = load_run(args)
        path = COMMAND_HANDLERS[run.command](run)
    except (ConfigError, SpecValidationError) as e:
        logger.error(f"Invalid configuration: {e}")
        return EXIT_INVALID
    except UnstableSystemError as e:
        logger.error(f"Stability required: {e}")
        return EXIT_UNSTABLE
    except DivergentIntegralError as e:
        logger.error(f"Divergence: {e}")
        return EXIT_DIVERGENT
    except Exception as e:
        logger.exception(f"An unexpected error occurred during execution: {e}")
        return EXIT_FAILURE
    logger.info(f"Command '{run.command}' finished: {path}")
    return EXIT_OK


