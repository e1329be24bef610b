"""
Command line argument parser for swarmkit.
"""

import argparse
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Union

from . import __version__
from .utils import parse_param_value

SEED_ENV = "SWARMKIT_SEED"


@dataclass
class CommandLineOptions:
    """Holds the parsed command line options."""
    command: str = ""
    debug: bool = False
    verbose: bool = False
    quiet: bool = False
    log_file: Optional[str] = None
    seed: Optional[int] = None  # --seed, else SWARMKIT_SEED, else the spec file decides
    horizon: Optional[int] = None  # overrides the spec file or scenario
    stability: Optional[int] = None
    eps: Optional[Fraction] = None
    sqrt_bits: Optional[int] = None
    # run
    spec_file: Optional[str] = None
    scenario: Optional[str] = None
    params: Dict[str, Union[int, Fraction, str]] = field(default_factory=dict)
    output_file: Optional[str] = None  # trace, or picture for render
    # analyze
    config_file: Optional[str] = None
    query: Optional[str] = None
    # suite
    suite_filter: str = "*"
    jobs: int = 1
    # render
    trace_file: Optional[str] = None
    run_index: int = 0


def _nonnegative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text}")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _sqrt_bits(text: str) -> int:
    value = int(text)
    if value < 16:
        raise argparse.ArgumentTypeError(f"--sqrt-bits must be at least 16, got {text}")
    return value


def _rational(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text}") from None
    if value <= 0:
        raise argparse.ArgumentTypeError(f"--eps must be positive, got {text}")
    return value


class CommandLineParser:
    """Parses command line arguments."""

    @staticmethod
    def build() -> argparse.ArgumentParser:
        common = argparse.ArgumentParser(add_help=False)
        common.add_argument(
            "--log-file", "-l", type=str,
            help="Also write log output to FILE"
        )
        verbosity_group = common.add_mutually_exclusive_group()
        verbosity_group.add_argument(
            "--quiet", "-Q", action="store_true",
            help="Quiet console output: only show errors on stderr"
        )
        verbosity_group.add_argument(
            "--verbose", "-v", action="store_true",
            help="Verbose console output: verdicts and scenario results"
        )
        verbosity_group.add_argument(
            "--debug", "-d", action="store_true",
            help="Debug console output: every step"
        )
        common.add_argument(
            "--seed", type=int,
            help=f"Master seed for every random stream (default: ${SEED_ENV}, else the spec file)"
        )
        common.add_argument(
            "--horizon", type=_positive,
            help="Maximum number of steps, overriding the spec file or scenario"
        )
        common.add_argument(
            "--stability", type=_nonnegative,
            help="Steps run after the goal is reached to check that it persists"
        )
        common.add_argument(
            "--eps", type=_rational,
            help="Relative tolerance for approximated comparisons (default: 1/2^64)"
        )
        common.add_argument(
            "--sqrt-bits", type=_sqrt_bits,
            help="Bits of precision of square roots (default: 128, at least 16)"
        )

        parser = argparse.ArgumentParser(
            prog="swarmkit",
            description="Simulate swarms of anonymous oblivious mobile robots."
        )
        parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
        commands = parser.add_subparsers(dest="command", required=True)

        run = commands.add_parser("run", parents=[common], help="Execute a run specification or a scenario")
        run.add_argument("spec_file", nargs="?", help="Run specification file ('-' for stdin)")
        run.add_argument("--scenario", "-s", type=str, help="Run a named scenario instead of a spec file")
        run.add_argument(
            "--param", "-p", action="append", default=[], metavar="KEY=VALUE",
            help="Scenario parameter; may be repeated"
        )
        run.add_argument("--output-file", "-o", type=str, help="Write the trace to FILE instead of stdout")

        analyze = commands.add_parser("analyze", parents=[common], help="Report the symmetry of a configuration")
        analyze.add_argument("config_file", help="Configuration file ('-' for stdin)")
        analyze.add_argument("--query", "-q", type=str, metavar="X,Y", help="Also print the view of this point")

        suite = commands.add_parser("suite", parents=[common], help="Run the registered scenarios")
        suite.add_argument("filter", nargs="?", default="*", help="Glob on scenario names (default: *)")
        suite.add_argument("--jobs", "-j", type=int, default=1, help="Worker processes (default: 1)")
        suite.add_argument("--output-file", "-o", type=str, help="Write all traces to FILE")

        render = commands.add_parser("render", parents=[common], help="Draw a trace as SVG or PNG")
        render.add_argument("trace_file", help="Trace file ('-' for stdin)")
        render.add_argument("output_file", help="Picture to write; PNG when it ends in .png")
        render.add_argument("--run", type=_nonnegative, default=0, dest="run_index",
                            help="Index of the run to draw in a multi-run trace (default: 0)")
        return parser

    @staticmethod
    def parse(args: List[str]) -> CommandLineOptions:
        """
        Parse command line arguments.

        Args:
            args: Command line arguments

        Returns:
            CommandLineOptions: The parsed options

        Raises:
            SystemExit: With status 2 on usage errors
        """
        parser = CommandLineParser.build()
        parsed = parser.parse_args(args)

        seed = parsed.seed
        if seed is None and os.environ.get(SEED_ENV):
            try:
                seed = int(os.environ[SEED_ENV])
            except ValueError:
                parser.error(f"{SEED_ENV} must be an integer, got {os.environ[SEED_ENV]!r}")

        params = {}
        for item in getattr(parsed, "param", []):
            key, sep, value = item.partition("=")
            if not sep or not key.strip():
                parser.error(f"--param expects KEY=VALUE, got {item!r}")
            params[key.strip()] = parse_param_value(value)

        if parsed.command == "run" and bool(parsed.spec_file) == bool(parsed.scenario):
            parser.error("run needs either a spec file or --scenario")
        if parsed.command == "suite" and parsed.jobs < 1:
            parser.error("--jobs must be at least 1")

        return CommandLineOptions(
            command=parsed.command,
            debug=parsed.debug,
            verbose=parsed.verbose,
            quiet=parsed.quiet,
            log_file=parsed.log_file,
            seed=seed,
            horizon=parsed.horizon,
            stability=parsed.stability,
            eps=parsed.eps,
            sqrt_bits=parsed.sqrt_bits,
            spec_file=getattr(parsed, "spec_file", None),
            scenario=getattr(parsed, "scenario", None),
            params=params,
            output_file=getattr(parsed, "output_file", None),
            config_file=getattr(parsed, "config_file", None),
            query=getattr(parsed, "query", None),
            suite_filter=getattr(parsed, "filter", "*"),
            jobs=getattr(parsed, "jobs", 1),
            trace_file=getattr(parsed, "trace_file", None),
            run_index=getattr(parsed, "run_index", 0),
        )
