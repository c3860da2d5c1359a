"""Command-line entry point: ``tanaka <command> [input] [options]``."""
from __future__ import annotations

import argparse
import logging
import sys
from typing import Sequence

from pydantic import ValidationError

from src.config import DEFAULT_CAP, DEFAULT_SAMPLES, DEFAULT_SEED, LOG_LEVEL
from src.graph.builder import pipeline
from src.models import Command, OutputFormat, RunConfig

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tanaka",
        description="Exact Tanaka prolongation of graded Lie algebras, pseudo-product "
        "symbols and polynomial distributions.",
    )
    parser.add_argument("command", choices=[c.value for c in Command])
    parser.add_argument(
        "target",
        nargs="?",
        help="input document path ('-' or omitted reads stdin); fixture name for 'fixtures'",
    )
    parser.add_argument("--cap", type=int, default=DEFAULT_CAP, help="highest degree to prolong to")
    parser.add_argument("--samples", type=int, default=DEFAULT_SAMPLES, help="random points for pointwise checks")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    parser.add_argument("--output", choices=[o.value for o in OutputFormat], default=OutputFormat.TEXT.value)
    parser.add_argument("--list", action="store_true", dest="list_fixtures", help="list fixtures")
    parser.add_argument("--log-level", default=LOG_LEVEL)
    return parser


def run(config: RunConfig, raw_input: str | None = None) -> tuple[int, str]:
    """Run the pipeline once and return ``(exit_code, output)``."""
    state: dict = {"config": config.model_dump()}
    if raw_input is not None:
        state["raw_input"] = raw_input
    final = pipeline.invoke(state)
    return final.get("exit_code", 0), final.get("output", "")


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=args.log_level.upper(),
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    command = Command(args.command)
    fixture = args.target if command is Command.FIXTURES else None
    input_path = None if command is Command.FIXTURES or args.target in (None, "-") else args.target
    try:
        config = RunConfig(
            command=command,
            input_path=input_path,
            cap=args.cap,
            samples=args.samples,
            seed=args.seed,
            output=OutputFormat(args.output),
            fixture=fixture,
            list_fixtures=args.list_fixtures,
        )
    except ValidationError as exc:
        print(f"Invalid options: {exc}", file=sys.stderr)
        return 3

    raw_input = None
    if command is not Command.FIXTURES and input_path is None:
        raw_input = sys.stdin.read()

    logger.debug("Running %s", command.value)
    exit_code, output = run(config, raw_input)
    sys.stdout.write(output)
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
