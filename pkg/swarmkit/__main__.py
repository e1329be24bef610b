"""
Main entry point for swarmkit.
"""

import inspect
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from typing import Dict, List, Optional, Tuple

from .cli_parser import CommandLineOptions, CommandLineParser
from .engine import ExecutionTrace, run
from .errors import (ScenarioError, SpecParseError, SwarmkitError, SymmetryError,
                     TraceFormatError)
from .geom import DEFAULT_TOLERANCE, ToleranceConfig, point
from .logger_setup import configure_logging
from .render import render_to_file
from .scenarios import (REGISTRY, ExpectationKind, build_scenario, check_expectation, run_scenario,
                        select_suite)
from .spec_format import materialize, parse_configuration, parse_run_spec
from .symmetry import order_points, orbits, rotation_order, symmetricity, view
from .trace_format import parse_trace, write_trace
from .utils import log_error_with_prefix, read_stdin_or_file, write_stdout_or_file

logger = logging.getLogger("swarmkit")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def tolerance_from_options(options: CommandLineOptions) -> Optional[ToleranceConfig]:
    if options.eps is None and options.sqrt_bits is None:
        return None
    return ToleranceConfig(rel_eps=options.eps or DEFAULT_TOLERANCE.rel_eps,
                           sqrt_precision=options.sqrt_bits or DEFAULT_TOLERANCE.sqrt_precision)


def print_summary(passed: int, failed: int) -> None:
    total = passed + failed
    print(f"Done. {total} run{'s' if total != 1 else ''}: {passed} passed, {failed} failed", file=sys.stderr)


# ───── run

def _scenario_params(options: CommandLineOptions) -> Dict[str, object]:
    params = dict(options.params)
    builder = REGISTRY.get(options.scenario)
    if builder is not None and options.seed is not None and "seed" not in params \
            and "seed" in inspect.signature(builder).parameters:
        params["seed"] = options.seed
    return params


def _run_named_scenario(options: CommandLineOptions, cfg: ToleranceConfig) -> Tuple[List[ExecutionTrace], int]:
    scenario = build_scenario(options.scenario, **_scenario_params(options))
    if options.stability is not None and scenario.expectation.kind is ExpectationKind.MUST_REACH:
        scenario.expectation = replace(scenario.expectation, stability_window=options.stability)
    logger.info("running %s, expecting %s", scenario.label, scenario.expectation)
    result = run_scenario(scenario, cfg, options.horizon)
    if not result.passed:
        log_error_with_prefix(f"{scenario.label}: {result.message}")
    return [result.trace], int(result.passed)


def _run_spec_file(options: CommandLineOptions, cfg: Optional[ToleranceConfig]) -> Tuple[List[ExecutionTrace], int]:
    spec = parse_run_spec(read_stdin_or_file(options.spec_file), options.spec_file)
    jobs = materialize(spec, options.seed, options.horizon, options.stability, cfg)
    traces, passed = [], 0
    for job in jobs:
        expectation = job.expectation
        trace = run(job.world, job.scheduler, job.goal, job.horizon,
                    stability_window=0 if expectation.is_negative else job.stability,
                    cfg=job.cfg, stop_on_stasis=not expectation.is_negative)
        ok, message = check_expectation(expectation, trace)
        logger.info("%s: %s", job.label, message)
        if not ok:
            log_error_with_prefix(f"{job.label}: {message}", options.spec_file)
        traces.append(trace)
        passed += ok
    return traces, passed


def cmd_run(options: CommandLineOptions) -> int:
    cfg = tolerance_from_options(options)
    if options.scenario:
        traces, passed = _run_named_scenario(options, cfg or DEFAULT_TOLERANCE)
    else:
        traces, passed = _run_spec_file(options, cfg)
    write_stdout_or_file(write_trace(traces), options.output_file)
    print_summary(passed, len(traces) - passed)
    return EXIT_OK if passed == len(traces) else EXIT_FAILED


# ───── analyze

def analysis_report(config, query=None, cfg: ToleranceConfig = DEFAULT_TOLERANCE) -> str:
    """The symmetry report printed by the analyze command."""
    sec = config.sec
    k = rotation_order(config, cfg)
    lines = [
        f"n: {len(config)}",
        f"m: {config.m}",
        f"k: {k}",
        f"sigma: {symmetricity(config, cfg)}",
        f"center: {sec.center}",
        f"squared radius: {sec.sq_radius}",
    ]
    for orbit in orbits(config, cfg).orbits:
        lines.append("orbit: " + " ".join(str(q) for q in sorted(orbit)))
    if k == 1:
        lines.append("order: " + " > ".join(str(q) for q in order_points(config, cfg=cfg)))
    if query is not None:
        lines.append(f"view of {query}: " + " ".join(str(z) for z in view(config, query, cfg).coords))
    return "\n".join(lines) + "\n"


def cmd_analyze(options: CommandLineOptions) -> int:
    config, query = parse_configuration(read_stdin_or_file(options.config_file), options.config_file)
    if options.query:
        try:
            query = point(*options.query.split(","))
        except (TypeError, SwarmkitError):
            raise SpecParseError(f"--query expects X,Y, got {options.query!r}") from None
    sys.stdout.write(analysis_report(config, query, tolerance_from_options(options) or DEFAULT_TOLERANCE))
    sys.stdout.flush()
    return EXIT_OK


# ───── suite

def _suite_entry(name: str, params: Dict[str, object], cfg: ToleranceConfig,
                 horizon: Optional[int]) -> Tuple[str, bool, str, ExecutionTrace]:
    result = run_scenario(build_scenario(name, **params), cfg, horizon)
    return result.scenario.label, result.passed, result.message, result.trace


def cmd_suite(options: CommandLineOptions) -> int:
    entries = select_suite(options.suite_filter)
    cfg = tolerance_from_options(options) or DEFAULT_TOLERANCE
    print(f"swarmkit suite running {len(entries)} scenario{'s' if len(entries) != 1 else ''}: "
          f"{options.suite_filter}", file=sys.stderr)
    if options.jobs > 1:
        with ProcessPoolExecutor(max_workers=options.jobs) as pool:
            futures = [pool.submit(_suite_entry, name, params, cfg, options.horizon) for name, params in entries]
            results = [future.result() for future in futures]
    else:
        results = [_suite_entry(name, params, cfg, options.horizon) for name, params in entries]

    passed = 0
    for label, ok, message, _ in results:
        logger.info("%-60s %s  %s", label, "ok" if ok else "FAILED", message)
        if ok:
            passed += 1
        else:
            log_error_with_prefix(f"{label}: {message}")
    if options.output_file:
        write_stdout_or_file(write_trace([trace for *_, trace in results]), options.output_file)
    print_summary(passed, len(results) - passed)
    return EXIT_OK if passed == len(results) else EXIT_FAILED


# ───── render

def cmd_render(options: CommandLineOptions) -> int:
    traces = parse_trace(read_stdin_or_file(options.trace_file), options.trace_file)
    if not 0 <= options.run_index < len(traces):
        raise TraceFormatError(f"{options.trace_file} has {len(traces)} runs, no run {options.run_index}")
    render_to_file(traces[options.run_index], options.output_file)
    return EXIT_OK


COMMANDS = {
    "run": cmd_run,
    "analyze": cmd_analyze,
    "suite": cmd_suite,
    "render": cmd_render,
}


def main(args: Optional[List[str]] = None) -> int:
    """
    Main entry point for the application.

    Args:
        args: Command line arguments (uses sys.argv[1:] if None)

    Returns:
        int: Exit code
    """
    if args is None:
        args = sys.argv[1:]

    try:
        options = CommandLineParser.parse(args)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    configure_logging(options)
    filename = options.spec_file or options.config_file or options.trace_file

    try:
        return COMMANDS[options.command](options)
    except (SpecParseError, TraceFormatError, ScenarioError, SymmetryError) as e:
        log_error_with_prefix(str(e))
        return EXIT_USAGE
    except OSError as e:
        log_error_with_prefix(f"{e.strerror}: {e.filename}" if e.filename else str(e), filename)
        return EXIT_USAGE
    except SwarmkitError as e:
        log_error_with_prefix(str(e), filename)
        if options.debug:
            logger.exception("Stack trace:")
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
