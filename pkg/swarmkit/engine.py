"""
Semi-synchronous execution of a robot swarm.

A World holds robots with their local frames, assigned target functions and
crash times. ``step`` applies one Look-Compute-Move round to an activated
subset; ``run`` drives a scheduler until a goal, a fixpoint or the horizon.
"""

import hashlib
import itertools
import logging
import math
import random
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Dict, Iterable, Iterator, Optional, Sequence, Tuple, Union

from .errors import AssignmentError, EngineError
from .geom import (DEFAULT_TOLERANCE, ORIGIN, Configuration, Point, ToleranceConfig,
                   is_similar, to_scalar)
from .symmetry import largest_point, rotation_order
from .targets import TargetFunctionId, evaluate

logger = logging.getLogger(__name__)

Assignment = Tuple[TargetFunctionId, ...]  # indexed by robot id


@dataclass(frozen=True)
class LocalFrame:
    """
    A right-handed similarity frame. A local point z is at
    position + scale * R(theta) z in global coordinates.
    """
    cos: Fraction
    sin: Fraction
    scale: Fraction  # global length of one local unit
    position: Point

    def __post_init__(self):
        if self.cos * self.cos + self.sin * self.sin != 1:
            raise EngineError("frame rotation must be a rational unit vector")
        if self.scale <= 0:
            raise EngineError("frame scale must be positive")

    @classmethod
    def from_rotation_param(cls, t, scale, position: Point) -> "LocalFrame":
        """Rotation with (cos, sin) = ((1 - t^2) / (1 + t^2), 2t / (1 + t^2))."""
        t = to_scalar(t)
        den = 1 + t * t
        return cls((1 - t * t) / den, 2 * t / den, to_scalar(scale), position)

    @classmethod
    def identity(cls, position: Point = ORIGIN) -> "LocalFrame":
        return cls(Fraction(1), Fraction(0), Fraction(1), position)

    def half_turn(self) -> "LocalFrame":
        return replace(self, cos=-self.cos, sin=-self.sin)

    def moved_to(self, position: Point) -> "LocalFrame":
        return replace(self, position=position)

    def to_local(self, p: Point) -> Point:
        return (p - self.position).times(Point(self.cos, -self.sin)).scaled(1 / self.scale)

    def to_global(self, z: Point) -> Point:
        return self.position + z.times(Point(self.cos, self.sin)).scaled(self.scale)


def random_frame(rng: random.Random, position: Point, max_param: int = 40,
                 max_scale: int = 8) -> LocalFrame:
    """A frame with random rational rotation parameter and scale."""
    t = Fraction(rng.randint(-max_param, max_param), rng.randint(1, max_param))
    scale = Fraction(rng.randint(1, max_scale), rng.randint(1, max_scale))
    return LocalFrame.from_rotation_param(t, scale, position)


@dataclass(frozen=True)
class Robot:
    id: int
    frame: LocalFrame
    tf: TargetFunctionId
    crashed_at: Optional[int] = None

    @property
    def position(self) -> Point:
        return self.frame.position

    def is_crashed(self, time: int) -> bool:
        return self.crashed_at is not None and self.crashed_at <= time


@dataclass(frozen=True)
class World:
    robots: Tuple[Robot, ...]
    time: int = 0

    @cached_property
    def config(self) -> Configuration:
        return Configuration.of(r.position for r in self.robots)

    @property
    def positions(self) -> Tuple[Point, ...]:
        return tuple(r.position for r in self.robots)

    @property
    def assignment(self) -> Assignment:
        return tuple(r.tf for r in self.robots)

    def crashed_ids(self) -> Tuple[int, ...]:
        return tuple(r.id for r in self.robots if r.is_crashed(self.time))

    def robot(self, robot_id: int) -> Robot:
        return self.robots[robot_id]


@dataclass(frozen=True)
class FaultPlan:
    crashes: Dict[int, int] = field(default_factory=dict)  # robot id -> crash time

    def validate(self, n: int, bound: Optional[int] = None) -> None:
        if bound is not None and len(self.crashes) > bound:
            raise EngineError(f"fault plan crashes {len(self.crashes)} robots, bound is {bound}")
        for robot_id, time in self.crashes.items():
            if not 0 <= robot_id < n:
                raise EngineError(f"fault plan names unknown robot {robot_id}")
            if time < 0:
                raise EngineError(f"crash time of robot {robot_id} is negative")


def build_world(positions: Sequence[Point], assignment: Sequence[TargetFunctionId],
                frames: Optional[Sequence[LocalFrame]] = None,
                faults: Optional[FaultPlan] = None) -> World:
    """Assemble a world; frames default to identity frames."""
    if len(positions) != len(assignment):
        raise EngineError(f"{len(positions)} positions but {len(assignment)} assigned target functions")
    if frames is None:
        frames = [LocalFrame.identity(p) for p in positions]
    elif len(frames) != len(positions):
        raise EngineError("one frame per robot is required")
    faults = faults or FaultPlan()
    faults.validate(len(positions))
    robots = tuple(Robot(i, frame.moved_to(p), tf, faults.crashes.get(i))
                   for i, (p, tf, frame) in enumerate(zip(positions, assignment, frames)))
    return World(robots)


def apply_fault_plan(world: World, plan: FaultPlan) -> World:
    plan.validate(len(world.robots))
    return replace(world, robots=tuple(replace(r, crashed_at=plan.crashes.get(r.id, r.crashed_at))
                                       for r in world.robots))


# ───── Look-Compute-Move

def observe(world: World, robot: Robot) -> Configuration:
    return world.config.map(robot.frame.to_local)


def destination(world: World, robot: Robot, cfg: ToleranceConfig = DEFAULT_TOLERANCE) -> Point:
    """Global destination of robot if it were activated now."""
    target = evaluate(robot.tf, observe(world, robot), cfg)
    if target is None:
        raise EngineError(f"target function {robot.tf} returned the error symbol for robot {robot.id}")
    return robot.frame.to_global(target)


def _snap(p: Point, occupied: Configuration, cfg: ToleranceConfig) -> Point:
    if p in occupied:
        return p
    limit = cfg.max_denominator_bits
    if max(p.x.denominator.bit_length(), p.y.denominator.bit_length()) <= limit:
        return p
    grid = 1 << (limit // 2)
    snapped = Point(Fraction(round(p.x * grid), grid), Fraction(round(p.y * grid), grid))
    logger.debug("snapped destination to a 2^-%d grid", limit // 2)
    return snapped


def step(world: World, activated: Iterable[int], cfg: ToleranceConfig = DEFAULT_TOLERANCE) -> World:
    """
    One SSYNC round: every activated, non-crashed robot observes the same
    configuration and all of them land at time + 1.
    """
    activated = frozenset(activated)
    unknown = activated.difference(range(len(world.robots)))
    if unknown:
        raise EngineError(f"activated unknown robots {sorted(unknown)}")
    moved = []
    for robot in world.robots:
        if robot.id in activated and not robot.is_crashed(world.time):
            target = _snap(destination(world, robot, cfg), world.config, cfg)
            robot = replace(robot, frame=robot.frame.moved_to(target))
        moved.append(robot)
    return World(tuple(moved), world.time + 1)


def is_stasis(world: World, cfg: ToleranceConfig = DEFAULT_TOLERANCE) -> bool:
    """No activation set can change the configuration."""
    return all(robot.is_crashed(world.time) or destination(world, robot, cfg) == robot.position
               for robot in world.robots)


def lambda_triple(config: Configuration, cfg: ToleranceConfig = DEFAULT_TOLERANCE) -> Tuple[int, int, int]:
    """(k_P, m_P, -mu_P), mu_P taken at the largest point when k_P = 1, else at o_P."""
    k = rotation_order(config, cfg)
    focus = largest_point(config, cfg) if k == 1 else config.sec.center
    return k, config.m, -config.multiplicity(focus)


# ───── goals

class GoalKind(str, Enum):
    SCATTER_AT_LEAST = "scatter-at-least"
    GATHER_AT_MOST = "gather-at-most"
    GATHER_NON_FAULTY = "gather-non-faulty"
    PATTERN_SIMILAR = "pattern-similar"
    GATHER_ALL_AT_MOST = "gather-all-at-most"


@dataclass(frozen=True)
class GoalPredicate:
    kind: GoalKind
    bound: int = 0
    pattern: Optional[Configuration] = None

    @classmethod
    def scatter_at_least(cls, c: int) -> "GoalPredicate":
        return cls(GoalKind.SCATTER_AT_LEAST, c)

    @classmethod
    def gather_at_most(cls, c: int) -> "GoalPredicate":
        return cls(GoalKind.GATHER_AT_MOST, c)

    @classmethod
    def gather_non_faulty(cls) -> "GoalPredicate":
        return cls(GoalKind.GATHER_NON_FAULTY)

    @classmethod
    def pattern_similar(cls, pattern: Configuration) -> "GoalPredicate":
        return cls(GoalKind.PATTERN_SIMILAR, pattern=pattern)

    @classmethod
    def gather_all_at_most(cls, f: int) -> "GoalPredicate":
        return cls(GoalKind.GATHER_ALL_AT_MOST, f)

    def __str__(self) -> str:
        if self.kind in (GoalKind.GATHER_NON_FAULTY, GoalKind.PATTERN_SIMILAR):
            return self.kind.value
        return f"{self.kind.value} {self.bound}"


def check_goal(goal: GoalPredicate, world: World, cfg: ToleranceConfig = DEFAULT_TOLERANCE) -> bool:
    config = world.config
    kind = goal.kind
    if kind is GoalKind.SCATTER_AT_LEAST:
        return config.m >= goal.bound
    if kind in (GoalKind.GATHER_AT_MOST, GoalKind.GATHER_ALL_AT_MOST):
        return config.m <= goal.bound
    if kind is GoalKind.GATHER_NON_FAULTY:
        alive = {r.position for r in world.robots if not r.is_crashed(world.time)}
        return len(alive) <= 1
    return is_similar(config, goal.pattern, cfg) is not None


# ───── executions

class VerdictKind(str, Enum):
    REACHED = "reached"
    HORIZON_EXCEEDED = "horizon-exceeded"
    STASIS = "stasis"


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    time: int

    def __str__(self) -> str:
        return f"{self.kind.value} {self.time}"


@dataclass(frozen=True)
class TraceStep:
    time: int
    activated: Tuple[int, ...]  # robots activated in the round that produced this snapshot
    crashed: Tuple[int, ...]
    positions: Tuple[Point, ...]  # by robot id
    lambda_triple: Tuple[int, int, int]

    @property
    def config(self) -> Configuration:
        return Configuration.of(self.positions)


@dataclass(frozen=True)
class ExecutionTrace:
    steps: Tuple[TraceStep, ...]
    verdict: Verdict
    goal_stable: Optional[bool] = None  # None when no stability window was run
    assignment: Tuple[str, ...] = ()
    goal: Optional[str] = None

    @property
    def final(self) -> TraceStep:
        return self.steps[-1]


def _record(world: World, activated: Iterable[int], cfg: ToleranceConfig) -> TraceStep:
    return TraceStep(world.time, tuple(sorted(activated)), world.crashed_ids(), world.positions,
                     lambda_triple(world.config, cfg))


def run(world: World, scheduler, goal: Optional[GoalPredicate], horizon: int,
        stability_window: int = 0, cfg: ToleranceConfig = DEFAULT_TOLERANCE,
        stop_on_stasis: bool = True) -> ExecutionTrace:
    """
    Execute until the goal holds, a fixpoint is detected or the horizon is hit.

    Args:
        world: Initial world
        scheduler: Activation policy (see schedulers)
        goal: Goal predicate; None runs to the horizon
        horizon: Last time instant that may be reached
        stability_window: Extra steps run after the goal is reached
        cfg: Tolerance configuration
        stop_on_stasis: Stop as soon as no robot would move

    Returns:
        ExecutionTrace: Every snapshot with its lambda triple, and the verdict
    """
    if horizon < 1:
        raise EngineError("horizon must be at least 1")
    steps = [_record(world, (), cfg)]
    while True:
        if goal is not None and check_goal(goal, world, cfg):
            verdict = Verdict(VerdictKind.REACHED, world.time)
            break
        if stop_on_stasis and is_stasis(world, cfg):
            verdict = Verdict(VerdictKind.STASIS, world.time)
            break
        if world.time >= horizon:
            verdict = Verdict(VerdictKind.HORIZON_EXCEEDED, world.time)
            break
        activated = scheduler.activate(world)
        world = step(world, activated, cfg)
        steps.append(_record(world, activated, cfg))
        logger.debug("t=%d activated=%s config=%s", world.time, sorted(activated), world.config)

    stable = None
    if verdict.kind is VerdictKind.REACHED and stability_window > 0:
        stable = True
        for _ in range(stability_window):
            activated = scheduler.activate(world)
            world = step(world, activated, cfg)
            steps.append(_record(world, activated, cfg))
            if not check_goal(goal, world, cfg):
                stable = False
    logger.info("verdict %s after %d steps%s", verdict, len(steps) - 1,
                "" if stable is None else f", goal {'stable' if stable else 'lost'}")
    return ExecutionTrace(tuple(steps), verdict, stable,
                          tuple(tf.tag for tf in world.assignment),
                          None if goal is None else str(goal))


def classify_gathering_outcome(world: World) -> str:
    """
    Name the terminal shape of a gathering run: "gathered", "bivalent",
    "stuck-crash" for an (n-1, 1) split whose single robot has crashed, or
    "other".
    """
    config = world.config
    if config.m == 1:
        return "gathered"
    if config.m == 2:
        a, b = (config.multiplicity(q) for q in config.support)
        if a == b:
            return "bivalent"
        lone = config.support[0] if a == 1 else config.support[1]
        if min(a, b) == 1 and all(r.is_crashed(world.time) for r in world.robots if r.position == lone):
            return "stuck-crash"
    return "other"


# ───── assignments

def validate_assignment(assignment: Sequence[TargetFunctionId], phi: Iterable[TargetFunctionId]) -> bool:
    """True iff the assignment is a surjection onto phi."""
    phi = set(phi)
    return len(phi) <= len(assignment) and set(assignment) == phi


def _surjection_count(k: int, n: int) -> int:
    return sum((-1) ** j * math.comb(k, j) * (k - j) ** n for j in range(k + 1))


def enumerate_assignments(phi: Sequence[TargetFunctionId], n: int, cap: int = 5000,
                          seed: int = 0, up_to_renaming: bool = False) -> Iterator[Assignment]:
    """
    Yield surjective assignments of phi onto n robots.

    With ``up_to_renaming`` robots are interchangeable (identical frames) and
    only the number of robots per target function matters. When more than
    ``cap`` assignments exist, a seeded random sample of ``cap`` is yielded.
    """
    phi = list(dict.fromkeys(phi))
    k = len(phi)
    if k == 0 or k > n:
        raise AssignmentError(f"no surjection from {n} robots onto {k} target functions")
    if up_to_renaming:
        for cuts in itertools.combinations(range(1, n), k - 1):
            bounds = (0,) + cuts + (n,)
            yield tuple(tf for tf, lo, hi in zip(phi, bounds, bounds[1:]) for _ in range(hi - lo))
        return
    if _surjection_count(k, n) <= cap:
        for choice in itertools.product(range(k), repeat=n):
            if len(set(choice)) == k:
                yield tuple(phi[i] for i in choice)
        return
    rng = random.Random(seed)
    seen = set()
    while len(seen) < cap:
        choice = list(range(k)) + [rng.randrange(k) for _ in range(n - k)]
        rng.shuffle(choice)
        assignment = tuple(phi[i] for i in choice)
        if assignment not in seen:
            seen.add(assignment)
            yield assignment


def derive_seed(seed: int, salt: Union[str, int]) -> int:
    """An independent 64-bit seed for one random stream of a run."""
    digest = hashlib.sha256(f"{seed}-{salt}".encode()).hexdigest()
    return int(digest, 16) % (1 << 64)
