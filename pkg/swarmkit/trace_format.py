"""
Line-oriented trace files.

    swarmkit-trace 1
    run 0
    assignment: gat:1 gat:2 gat:1 gat:2
    goal: gather-at-most 1
    verdict: reached 12
    stable: -
    step<TAB>time<TAB>activated<TAB>crashed<TAB>positions<TAB>lambda
    ...
    end

Ids are comma separated ("-" when empty), positions are "x,y" pairs joined by
";" with every coordinate written as "num/den", so traces parse back exactly.
"""

import logging
from typing import List, Optional, Sequence, Tuple

from .engine import ExecutionTrace, TraceStep, Verdict, VerdictKind
from .errors import SwarmkitError, TraceFormatError
from .geom import Point, format_scalar, to_scalar

logger = logging.getLogger(__name__)

MAGIC = "swarmkit-trace"
VERSION = 1
NONE = "-"


def _ids(ids: Sequence[int]) -> str:
    return ",".join(str(i) for i in ids) if ids else NONE


def _positions(points: Sequence[Point]) -> str:
    return ";".join(f"{format_scalar(p.x)},{format_scalar(p.y)}" for p in points)


def format_step(step: TraceStep) -> str:
    k, m, mu = step.lambda_triple
    return "\t".join(("step", str(step.time), _ids(step.activated), _ids(step.crashed),
                      _positions(step.positions), f"{k},{m},{mu}"))


def write_trace(traces: Sequence[ExecutionTrace]) -> str:
    lines = [f"{MAGIC} {VERSION}"]
    for index, trace in enumerate(traces):
        stable = NONE if trace.goal_stable is None else ("yes" if trace.goal_stable else "no")
        lines.append(f"run {index}")
        lines.append(f"assignment: {' '.join(trace.assignment) or NONE}")
        lines.append(f"goal: {trace.goal or NONE}")
        lines.append(f"verdict: {trace.verdict.kind.value} {trace.verdict.time}")
        lines.append(f"stable: {stable}")
        lines.extend(format_step(step) for step in trace.steps)
        lines.append("end")
    return "\n".join(lines) + "\n"


# ───── parsing

def _parse_ids(text: str) -> Tuple[int, ...]:
    if text == NONE:
        return ()
    return tuple(int(part) for part in text.split(","))


def _parse_positions(text: str) -> Tuple[Point, ...]:
    if not text:
        return ()
    points = []
    for pair in text.split(";"):
        x, y = pair.split(",")
        points.append(Point(to_scalar(x), to_scalar(y)))
    return tuple(points)


def _parse_step(line: str) -> TraceStep:
    fields = line.split("\t")
    if len(fields) != 6 or fields[0] != "step":
        raise ValueError(f"expected 6 tab-separated fields, got {len(fields)}")
    k, m, mu = (int(part) for part in fields[5].split(","))
    return TraceStep(int(fields[1]), _parse_ids(fields[2]), _parse_ids(fields[3]),
                     _parse_positions(fields[4]), (k, m, mu))


def _header_value(line: str, key: str) -> str:
    prefix = f"{key}:"
    if not line.startswith(prefix):
        raise ValueError(f"expected '{prefix}'")
    return line[len(prefix):].strip()


def parse_trace(text: str, source: str = "<trace>") -> List[ExecutionTrace]:
    """
    Parse every run of a trace file.

    Raises:
        TraceFormatError: Wrong header, unknown version or a malformed line
    """
    lines = text.splitlines()
    if not lines or lines[0].split()[:1] != [MAGIC]:
        raise TraceFormatError(f"{source}: not a swarmkit trace")
    try:
        version = int(lines[0].split()[1])
    except (IndexError, ValueError):
        raise TraceFormatError(f"{source}: missing trace version") from None
    if version != VERSION:
        raise TraceFormatError(f"{source}: unsupported trace version {version}")

    traces: List[ExecutionTrace] = []
    index = 1
    while index < len(lines):
        if not lines[index].strip():
            index += 1
            continue
        start = index
        try:
            if not lines[index].startswith("run "):
                raise ValueError("expected 'run'")
            assignment = _header_value(lines[index + 1], "assignment")
            goal = _header_value(lines[index + 2], "goal")
            verdict_kind, verdict_time = _header_value(lines[index + 3], "verdict").split()
            stable = _header_value(lines[index + 4], "stable")
            index += 5
            steps = []
            while lines[index] != "end":
                steps.append(_parse_step(lines[index]))
                index += 1
            index += 1
            if not steps:
                raise ValueError("a run needs at least one step")
            stable_flag: Optional[bool] = None if stable == NONE else stable == "yes"
            traces.append(ExecutionTrace(
                tuple(steps), Verdict(VerdictKind(verdict_kind), int(verdict_time)), stable_flag,
                () if assignment == NONE else tuple(assignment.split()),
                None if goal == NONE else goal))
        except IndexError:
            raise TraceFormatError(f"{source}: run starting at line {start + 1} is truncated") from None
        except (ValueError, SwarmkitError) as e:
            raise TraceFormatError(f"{source}:{index + 1}: {e}") from None
    logger.debug("%s: parsed %d runs", source, len(traces))
    return traces
