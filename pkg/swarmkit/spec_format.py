"""
Run specifications and configuration files.

Both are line-oriented ``key: value`` text with ``#`` comments; a JSON object
with the same keys is accepted as well. Numbers are exact rationals written
as integers, decimals or "num/den".

Example run specification::

    algorithm: gata
    point: 0 0
    point: 0 0
    point: 1 0
    point: 1 0
    frames: random seed=4
    assignment: gat:1 gat:2 gat:1 gat:2
    scheduler: fair-random p=1/2 bound=10
    goal: gather-at-most 1
    horizon: 2000
"""

import json
import logging
import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from . import algorithms
from .engine import (FaultPlan, GoalKind, GoalPredicate, LocalFrame, World, build_world,
                     derive_seed, enumerate_assignments, random_frame, validate_assignment)
from .errors import SpecParseError, SwarmkitError
from .geom import (DEFAULT_TOLERANCE, ORIGIN, Configuration, Point, ToleranceConfig, point,
                   random_configuration, to_scalar)
from .scenarios import Expectation, ExpectationKind, resolve_pattern
from .schedulers import Scheduler, make_scheduler
from .targets import TargetFunctionId

logger = logging.getLogger(__name__)

REPEATED_KEYS = ("point", "frame", "crash")
KNOWN_KEYS = ("algorithm", "n", "pattern", "point", "initial", "frames", "frame", "assignment",
              "scheduler", "crash", "fault-bound", "goal", "expect", "horizon", "stability",
              "eps", "sqrt-bits", "seed")


@dataclass
class RunSpec:
    """A parsed run specification; seeds are resolved when it is materialized."""
    algorithm: str = ""
    n: Optional[int] = None
    pattern: Optional[str] = None
    points: List[Point] = field(default_factory=list)
    initial: Dict[str, str] = field(default_factory=dict)  # generator options
    frames: Dict[str, str] = field(default_factory=lambda: {"kind": "identity"})
    frame_params: List[Tuple[str, str]] = field(default_factory=list)  # explicit (t, scale)
    assignment: List[str] = field(default_factory=lambda: ["sampled"])
    scheduler: List[str] = field(default_factory=lambda: ["fsync"])
    crashes: Dict[int, int] = field(default_factory=dict)
    fault_bound: Optional[int] = None
    goal: Optional[str] = None
    expect: List[str] = field(default_factory=lambda: ["reach"])
    horizon: int = 200
    stability: int = 0
    eps: Optional[str] = None
    sqrt_bits: Optional[int] = None
    seed: Optional[int] = None
    source: str = "<spec>"


@dataclass
class RunJob:
    """One concrete execution described by a RunSpec."""
    world: World
    scheduler: Scheduler
    goal: Optional[GoalPredicate]
    expectation: Expectation
    horizon: int
    stability: int
    cfg: ToleranceConfig
    label: str


# ───── parsing

def _options(words: Sequence[str]) -> Dict[str, str]:
    """Split ["random", "seed=3", "distinct"] into {"kind": "random", "seed": "3", "distinct": ""}."""
    result: Dict[str, str] = {}
    for index, word in enumerate(words):
        if "=" in word:
            key, value = word.split("=", 1)
            result[key.strip()] = value.strip()
        elif index == 0:
            result["kind"] = word
        else:
            result[word] = ""
    return result


def _int(value, key: str, source: str) -> int:
    try:
        return int(str(value).strip())
    except ValueError:
        raise SpecParseError(f"{source}: {key} expects an integer, got {value!r}") from None


def _point(words: Sequence[str], source: str) -> Point:
    if len(words) == 1 and "," in words[0]:
        words = words[0].split(",")
    if len(words) != 2:
        raise SpecParseError(f"{source}: a point needs two coordinates, got {' '.join(words)!r}")
    try:
        return point(words[0], words[1])
    except SwarmkitError as e:
        raise SpecParseError(f"{source}: {e}") from None


def _entries_from_text(text: str, source: str) -> List[Tuple[int, str, str]]:
    entries = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            if raw.strip():
                logger.debug("%s:%d: skipped comment", source, number)
            continue
        if ":" not in line:
            raise SpecParseError(f"{source}:{number}: expected 'key: value', got {raw.strip()!r}")
        key, value = line.split(":", 1)
        entries.append((number, key.strip().lower(), value.strip()))
    return entries


def _entries_from_json(text: str, source: str) -> List[Tuple[int, str, str]]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise SpecParseError(f"{source}: invalid JSON: {e}") from None
    if not isinstance(data, dict):
        raise SpecParseError(f"{source}: a JSON specification must be an object")
    entries = []
    for key, value in data.items():
        key = key.replace("_", "-").lower()
        # JSON lists of points, frames or crashes become repeated keys
        key = {"points": "point", "frames-explicit": "frame", "crashes": "crash"}.get(key, key)
        items = value if key in REPEATED_KEYS and isinstance(value, list) else [value]
        for item in items:
            if isinstance(item, list):
                item = " ".join(str(part) for part in item)
            entries.append((0, key, str(item)))
    return entries


def parse_run_spec(text: str, source: str = "<spec>") -> RunSpec:
    """
    Parse a run specification.

    Raises:
        SpecParseError: Unknown keys, malformed numbers or inconsistent fields
    """
    stripped = text.lstrip()
    entries = _entries_from_json(text, source) if stripped.startswith("{") else _entries_from_text(text, source)
    spec = RunSpec(source=source)
    for number, key, value in entries:
        where = f"{source}:{number}" if number else source
        words = value.split()
        if key not in KNOWN_KEYS:
            raise SpecParseError(f"{where}: unknown key {key!r}")
        if key == "algorithm":
            spec.algorithm = value
        elif key == "n":
            spec.n = _int(value, key, where)
        elif key == "pattern":
            spec.pattern = value
        elif key == "point":
            spec.points.append(_point(words, where))
        elif key == "initial":
            spec.initial = _options(words)
        elif key == "frames":
            spec.frames = _options(words)
        elif key == "frame":
            if len(words) != 2:
                raise SpecParseError(f"{where}: frame expects 'rotation-param scale'")
            spec.frame_params.append((words[0], words[1]))
        elif key == "assignment":
            spec.assignment = words
        elif key == "scheduler":
            spec.scheduler = words
        elif key == "crash":
            if len(words) != 2:
                raise SpecParseError(f"{where}: crash expects 'robot time'")
            spec.crashes[_int(words[0], key, where)] = _int(words[1], key, where)
        elif key == "fault-bound":
            spec.fault_bound = _int(value, key, where)
        elif key == "goal":
            spec.goal = value
        elif key == "expect":
            spec.expect = words
        elif key in ("horizon", "stability", "sqrt-bits", "seed"):
            setattr(spec, key.replace("-", "_"), _int(value, key, where))
        elif key == "eps":
            spec.eps = value
    _check(spec)
    return spec


def _check(spec: RunSpec) -> None:
    source = spec.source
    if not spec.algorithm:
        raise SpecParseError(f"{source}: no algorithm given")
    if spec.points and spec.initial:
        raise SpecParseError(f"{source}: give either explicit points or an initial generator")
    if spec.points:
        if spec.n is not None and spec.n != len(spec.points):
            raise SpecParseError(f"{source}: n is {spec.n} but {len(spec.points)} points are listed")
        spec.n = len(spec.points)
    if not spec.n or spec.n < 1:
        raise SpecParseError(f"{source}: the number of robots is unknown")
    if spec.frame_params and len(spec.frame_params) != spec.n:
        raise SpecParseError(f"{source}: {len(spec.frame_params)} frames for {spec.n} robots")
    if spec.horizon < 1:
        raise SpecParseError(f"{source}: horizon must be at least 1")
    if spec.stability < 0:
        raise SpecParseError(f"{source}: stability must be nonnegative")
    if spec.fault_bound is not None and len(spec.crashes) > spec.fault_bound:
        raise SpecParseError(f"{source}: {len(spec.crashes)} crashes exceed the fault bound {spec.fault_bound}")


# ───── goals and expectations

def parse_goal(text: str, pattern: Optional[Configuration] = None) -> GoalPredicate:
    words = text.split()
    if not words:
        raise SpecParseError("empty goal")
    try:
        kind = GoalKind(words[0].lower())
    except ValueError:
        raise SpecParseError(f"unknown goal {words[0]!r}") from None
    if kind is GoalKind.GATHER_NON_FAULTY:
        return GoalPredicate.gather_non_faulty()
    if kind is GoalKind.PATTERN_SIMILAR:
        if pattern is None:
            raise SpecParseError("pattern-similar needs a pattern")
        return GoalPredicate.pattern_similar(pattern)
    if len(words) != 2:
        raise SpecParseError(f"goal {kind.value} expects one integer bound")
    return GoalPredicate(kind, _int(words[1], "goal", "goal"))


def parse_expectation(words: Sequence[str], horizon: int, stability: int) -> Expectation:
    kind = words[0].lower() if words else "reach"
    if kind == "reach":
        return Expectation.must_reach(horizon, stability)
    if kind == "not-change":
        return Expectation.must_not_change(horizon)
    if kind == "change":
        return Expectation.must_change(horizon)
    if kind == "stay-below" and len(words) == 2:
        return Expectation.must_stay_below(_int(words[1], "expect", "expect"), horizon)
    raise SpecParseError(f"unknown expectation {' '.join(words)!r}")


def _default_goal(spec: RunSpec, pattern: Optional[Configuration]) -> Optional[GoalPredicate]:
    name = spec.algorithm.lower()
    if pattern is not None:
        return GoalPredicate.pattern_similar(pattern)
    if name.endswith("scta") and name[:-4].isdigit():
        return GoalPredicate.scatter_at_least(int(name[:-4]))
    if name.startswith("ft-scta:"):
        return GoalPredicate.scatter_at_least(int(name[len("ft-scta:"):].split(",")[0]))
    if name in ("2gata", "gata", "clone"):
        return GoalPredicate.gather_at_most(1)
    if name == "sgta":
        return GoalPredicate.gather_non_faulty()
    return None


# ───── materializing

def stream_seed(spec: RunSpec, stream: str, explicit: Optional[str], master: Optional[int]) -> int:
    """
    Seed of one random stream. A master seed from the command line or the
    environment wins over seeds written in the file.
    """
    if master is not None:
        return derive_seed(master, stream)
    if explicit:
        return _int(explicit, "seed", spec.source)
    return derive_seed(spec.seed if spec.seed is not None else 0, stream)


def tolerance_for(spec: RunSpec, eps: Optional[str] = None, sqrt_bits: Optional[int] = None) -> ToleranceConfig:
    eps = eps or spec.eps
    sqrt_bits = sqrt_bits or spec.sqrt_bits
    try:
        return ToleranceConfig(
            rel_eps=to_scalar(eps) if eps else DEFAULT_TOLERANCE.rel_eps,
            sqrt_precision=sqrt_bits or DEFAULT_TOLERANCE.sqrt_precision,
        )
    except SwarmkitError as e:
        raise SpecParseError(f"{spec.source}: {e}") from None


def _initial_positions(spec: RunSpec, master: Optional[int]) -> List[Point]:
    if spec.points:
        return list(spec.points)
    options = spec.initial or {"kind": "random"}
    if options.get("kind") == "gathered":
        return [ORIGIN] * spec.n
    if options.get("kind") != "random":
        raise SpecParseError(f"{spec.source}: unknown initial generator {options.get('kind')!r}")
    rng = random.Random(stream_seed(spec, "initial", options.get("seed"), master))
    box = _int(options.get("box", "10"), "box", spec.source)
    positions = list(random_configuration(rng, spec.n, box=box, distinct="distinct" in options).points)
    rng.shuffle(positions)
    return positions


def _frames(spec: RunSpec, master: Optional[int]) -> List[LocalFrame]:
    if spec.frame_params:
        try:
            return [LocalFrame.from_rotation_param(t, scale, ORIGIN) for t, scale in spec.frame_params]
        except SwarmkitError as e:
            raise SpecParseError(f"{spec.source}: {e}") from None
    kind = spec.frames.get("kind", "identity")
    if kind == "identity":
        return [LocalFrame.identity() for _ in range(spec.n)]
    if kind == "random":
        rng = random.Random(stream_seed(spec, "frames", spec.frames.get("seed"), master))
        return [random_frame(rng, ORIGIN) for _ in range(spec.n)]
    raise SpecParseError(f"{spec.source}: unknown frames generator {kind!r}")


def _assignments(spec: RunSpec, phi: Sequence[TargetFunctionId], pattern: Optional[Configuration],
                 master: Optional[int]) -> List[Tuple[TargetFunctionId, ...]]:
    words = spec.assignment
    mode = words[0] if words else "sampled"
    try:
        if mode == "all-surjections":
            options = _options(words)
            cap = _int(options.get("cap", "64"), "cap", spec.source)
            return list(enumerate_assignments(phi, spec.n, cap=cap,
                                              seed=stream_seed(spec, "assignment", options.get("seed"), master)))
        if mode == "sampled":
            options = _options(words)
            seed = stream_seed(spec, "assignment", options.get("seed"), master)
            choices = list(enumerate_assignments(phi, spec.n, cap=64, seed=seed))
            return [random.Random(seed).choice(choices)]
        explicit = tuple(TargetFunctionId.parse(tag, pattern) for tag in words)
    except SwarmkitError as e:
        raise SpecParseError(f"{spec.source}: {e}") from None
    if len(explicit) != spec.n:
        raise SpecParseError(f"{spec.source}: {len(explicit)} assigned functions for {spec.n} robots")
    if not validate_assignment(explicit, phi):
        raise SpecParseError(f"{spec.source}: the assignment is not a surjection onto {spec.algorithm}")
    return [explicit]


def _scheduler(spec: RunSpec, master: Optional[int]) -> Scheduler:
    words = spec.scheduler
    kind = words[0] if words else "fsync"
    try:
        if kind == "scripted":
            script = [[int(i) for i in word.strip("{}").split(",") if i] for word in words[1:]]
            return make_scheduler(kind, script=script)
        options = _options(words)
        return make_scheduler(kind, seed=stream_seed(spec, "scheduler", options.get("seed"), master),
                              p=to_scalar(options.get("p", "1/2")),
                              bound=_int(options.get("bound", "10"), "bound", spec.source))
    except (SwarmkitError, ValueError) as e:
        raise SpecParseError(f"{spec.source}: {e}") from None


def materialize(spec: RunSpec, master_seed: Optional[int] = None, horizon: Optional[int] = None,
                stability: Optional[int] = None, cfg: Optional[ToleranceConfig] = None) -> List[RunJob]:
    """
    Build the executions a specification describes: one per assignment.

    Args:
        spec: Parsed specification
        master_seed: Seed from --seed or SWARMKIT_SEED, overriding file seeds
        horizon: Override of the file's horizon
        stability: Override of the file's stability window
        cfg: Override of the file's tolerance configuration

    Returns:
        List[RunJob]: The runs, each with a fresh scheduler
    """
    cfg = cfg or tolerance_for(spec)
    horizon = horizon if horizon is not None else spec.horizon
    stability = stability if stability is not None else spec.stability
    try:
        pattern = resolve_pattern(spec.pattern, spec.n) if spec.pattern else None
        phi = algorithms.by_name(spec.algorithm, pattern)
    except SwarmkitError as e:
        raise SpecParseError(f"{spec.source}: {e}") from None
    goal = parse_goal(spec.goal, pattern) if spec.goal else _default_goal(spec, pattern)
    expectation = parse_expectation(spec.expect, horizon, stability)
    if expectation.kind is ExpectationKind.MUST_REACH and goal is None:
        raise SpecParseError(f"{spec.source}: no goal given and none is implied by {spec.algorithm}")
    positions = _initial_positions(spec, master_seed)
    frames = _frames(spec, master_seed)
    jobs = []
    for index, assignment in enumerate(_assignments(spec, phi, pattern, master_seed)):
        try:
            world = build_world(positions, assignment, frames, FaultPlan(dict(spec.crashes)))
        except SwarmkitError as e:
            raise SpecParseError(f"{spec.source}: {e}") from None
        jobs.append(RunJob(world, _scheduler(spec, master_seed), goal, expectation, horizon, stability,
                           cfg, f"{spec.algorithm}#{index}"))
    logger.debug("%s: %d runs", spec.source, len(jobs))
    return jobs


# ───── configuration files

def parse_configuration(text: str, source: str = "<config>") -> Tuple[Configuration, Optional[Point]]:
    """
    Read a configuration: one point per line as "x y", "x,y" or "point: x y",
    optionally a "query: x y" line; or JSON {"points": [[x, y], ...], "query": [x, y]}.

    Returns:
        Tuple[Configuration, Optional[Point]]: The configuration and the query point
    """
    points: List[Point] = []
    query = None
    if text.lstrip().startswith("{"):
        for _, key, value in _entries_from_json(text, source):
            if key == "point":
                points.append(_point(value.split(), source))
            elif key == "query":
                query = _point(value.split(), source)
            else:
                raise SpecParseError(f"{source}: unknown key {key!r}")
    else:
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                if raw.strip():
                    logger.debug("%s:%d: skipped comment", source, number)
                continue
            key, _, value = line.rpartition(":")
            key = key.strip().lower()
            if key not in ("", "point", "query"):
                raise SpecParseError(f"{source}:{number}: unknown key {key!r}")
            p = _point(value.replace(",", " ").split(), f"{source}:{number}")
            if key == "query":
                query = p
            else:
                points.append(p)
    if not points:
        raise SpecParseError(f"{source}: empty configuration")
    return Configuration.of(points), query
