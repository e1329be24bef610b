"""
Named, parameterized scenarios: the lower-bound and impossibility
constructions, and seeded solvability runs of the algorithms.

Every builder is deterministic in its parameters and returns a Scenario whose
expectation is checked from the execution trace alone.
"""

import fnmatch
import logging
import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import algorithms
from .engine import (ExecutionTrace, FaultPlan, GoalPredicate, LocalFrame, VerdictKind, World,
                     build_world, derive_seed, enumerate_assignments, random_frame, run)
from .errors import ScenarioError, SwarmkitError
from .geom import (DEFAULT_TOLERANCE, ORIGIN, Configuration, Point, ToleranceConfig, point,
                   random_configuration, regular_polygon)
from .schedulers import (FairRandomScheduler, FsyncScheduler, Scheduler, ScriptedScheduler)
from .targets import TargetFunctionId, gat_id, sct_id, sgat_id, sym_id, TWO_GAT

logger = logging.getLogger(__name__)

DEFAULT_HORIZON = 200


class ExpectationKind(str, Enum):
    MUST_REACH = "must-reach"
    MUST_NOT_CHANGE = "must-not-change"
    MUST_STAY_BELOW = "must-stay-below"
    MUST_CHANGE = "must-change"


@dataclass(frozen=True)
class Expectation:
    kind: ExpectationKind
    horizon: int
    bound: int = 0  # MUST_STAY_BELOW: support size stays strictly below this
    stability_window: int = 0  # MUST_REACH: goal must persist this many steps

    @classmethod
    def must_reach(cls, horizon: int, stability_window: int = 0) -> "Expectation":
        return cls(ExpectationKind.MUST_REACH, horizon, stability_window=stability_window)

    @classmethod
    def must_not_change(cls, horizon: int = DEFAULT_HORIZON) -> "Expectation":
        return cls(ExpectationKind.MUST_NOT_CHANGE, horizon)

    @classmethod
    def must_stay_below(cls, bound: int, horizon: int = DEFAULT_HORIZON) -> "Expectation":
        return cls(ExpectationKind.MUST_STAY_BELOW, horizon, bound=bound)

    @classmethod
    def must_change(cls, horizon: int = DEFAULT_HORIZON) -> "Expectation":
        return cls(ExpectationKind.MUST_CHANGE, horizon)

    @property
    def is_negative(self) -> bool:
        return self.kind is not ExpectationKind.MUST_REACH

    def __str__(self) -> str:
        if self.kind is ExpectationKind.MUST_STAY_BELOW:
            return f"{self.kind.value} {self.bound} for {self.horizon} steps"
        if self.kind is ExpectationKind.MUST_REACH and self.stability_window:
            return f"{self.kind.value} within {self.horizon}, stable {self.stability_window}"
        return f"{self.kind.value} within {self.horizon}" if self.kind is ExpectationKind.MUST_REACH \
            else f"{self.kind.value} for {self.horizon} steps"


@dataclass
class Scenario:
    name: str
    params: Dict[str, object]
    world: World
    scheduler: Scheduler
    goal: Optional[GoalPredicate]
    expectation: Expectation
    description: str = ""

    @property
    def label(self) -> str:
        args = ",".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        return f"{self.name}({args})"


@dataclass
class ScenarioResult:
    scenario: Scenario
    passed: bool
    message: str
    trace: Optional[ExecutionTrace] = field(default=None, repr=False)


# ───── helpers

def _identity_frames(n: int) -> List[LocalFrame]:
    return [LocalFrame.identity() for _ in range(n)]


def _random_frames(seed: int, n: int) -> List[LocalFrame]:
    rng = random.Random(derive_seed(seed, "frames"))
    return [random_frame(rng, ORIGIN) for _ in range(n)]


def _sampled_assignment(phi: Sequence[TargetFunctionId], n: int, seed: int) -> Tuple[TargetFunctionId, ...]:
    rng = random.Random(derive_seed(seed, "assignment"))
    choices = list(enumerate_assignments(phi, n, cap=64, seed=derive_seed(seed, "assignment-sample")))
    return rng.choice(choices)


def bivalent_positions(n: int, p: Point = ORIGIN, q: Point = Point(Fraction(1), Fraction(0))) -> List[Point]:
    """ceil(n/2) robots at p and floor(n/2) at q."""
    return [p] * ((n + 1) // 2) + [q] * (n // 2)


def multiset_pattern(n: int) -> Configuration:
    """A regular (n-1)-gon with one vertex doubled."""
    polygon = regular_polygon(n - 1)
    return polygon.with_point(polygon.points[0])


def resolve_pattern(pattern, n: int) -> Configuration:
    """A Configuration, or one of the names "polygon" and "multiset", or "x,y;x,y;..."."""
    if isinstance(pattern, Configuration):
        return pattern
    if pattern is None or pattern == "polygon":
        return regular_polygon(n)
    if pattern == "multiset":
        return multiset_pattern(n)
    try:
        pairs = [chunk.split(",") for chunk in str(pattern).split(";") if chunk.strip()]
        return Configuration.of(point(x.strip(), y.strip()) for x, y in pairs)
    except (ValueError, SwarmkitError) as e:
        raise ScenarioError(f"cannot read pattern {pattern!r}: {e}") from None


# ───── lower bounds and impossibility constructions

def scatter_lower_bound(c: int = 3, m: int = 2, n: int = 4, horizon: int = DEFAULT_HORIZON) -> Scenario:
    """
    An m-function subset of cSCTA on n robots sharing one point and one frame
    orientation: robots with the same function stay clones forever, so the
    support never exceeds m.
    """
    if c < 2:
        raise ScenarioError("c must be at least 2; one point is always scattered")
    if not 1 <= m < c <= n:
        raise ScenarioError(f"need 1 <= m < c <= n, got m={m}, c={c}, n={n}")
    phi = [sct_id(i, c) for i in range(1, m + 1)]
    assignment = [phi[i % m] for i in range(n)]
    world = build_world([ORIGIN] * n, assignment, _identity_frames(n))
    return Scenario("scatter_lower_bound", dict(c=c, m=m, n=n), world, FsyncScheduler(),
                    GoalPredicate.scatter_at_least(c), Expectation.must_stay_below(m + 1, horizon),
                    "clones never separate")


def bivalent_stasis(n: int = 4, algorithm: str = "2gata", seed: int = 0,
                    horizon: int = 100) -> Scenario:
    if n < 4 or n % 2:
        raise ScenarioError(f"a bivalent configuration needs an even n >= 4, got {n}")
    if algorithm == "2gata":
        assignment = [TWO_GAT] * n
        expectation = Expectation.must_not_change(horizon)
    elif algorithm == "gata":
        # both functions on both sides
        assignment = [gat_id(1 + i % 2) for i in range(n)]
        expectation = Expectation.must_change(horizon)
    else:
        raise ScenarioError(f"bivalent_stasis runs 2gata or gata, not {algorithm!r}")
    world = build_world(bivalent_positions(n), assignment, _random_frames(seed, n))
    return Scenario("bivalent_stasis", dict(n=n, algorithm=algorithm, seed=seed), world,
                    FsyncScheduler(), GoalPredicate.gather_at_most(1), expectation)


def clone_symmetric_failure(variant: str = "clones", horizon: int = 100) -> Scenario:
    """
    Four robots in two clone pairs. Robots 0 and 2 sit at p, robots 1 and 3 at
    q; robots 2 and 3 use the frame of robots 0 and 1 turned by pi.
    """
    p, q = ORIGIN, Point(Fraction(1), Fraction(0))
    base = LocalFrame.from_rotation_param(Fraction(1, 3), Fraction(1), ORIGIN)
    frames = [base, base, base.half_turn(), base.half_turn()]
    positions = [p, q, p, q]
    if variant == "clones":
        stay, hop = sym_id(0), sym_id(1)
        assignment = [stay, stay, hop, hop]
        scheduler = ScriptedScheduler([{0, 1, 2, 3}, {0, 1}, {2, 3}])
        goal, expectation = GoalPredicate.gather_at_most(1), Expectation.must_not_change(horizon)
    elif variant == "gat2":
        assignment = [sym_id(0), sym_id(0), gat_id(2), gat_id(2)]
        scheduler = FsyncScheduler()
        goal, expectation = GoalPredicate.gather_at_most(1), Expectation.must_change(horizon)
    elif variant == "sgta":
        assignment = [sgat_id(1), sgat_id(1), sgat_id(2), sgat_id(3)]
        # the p side holds sgat_1 and sgat_2
        scheduler = ScriptedScheduler([{0, 2}])
        goal, expectation = GoalPredicate.scatter_at_least(3), Expectation.must_reach(1)
    else:
        raise ScenarioError(f"unknown clone variant {variant!r}")
    world = build_world(positions, assignment, frames)
    return Scenario("clone_symmetric_failure", dict(variant=variant), world, scheduler, goal, expectation)


def crash_scatter_lower_bound(f: int = 2, n: int = 5, variant: str = "default",
                              horizon: int = DEFAULT_HORIZON) -> Scenario:
    """
    All robots at one point. The f robots holding the functions that leave
    the point crash at time 0; every live robot holds the function that stays.
    The tight variant adds one more function held by a live robot.
    """
    if not 1 <= f <= n - 1:
        raise ScenarioError(f"need 1 <= f <= n - 1, got f={f}, n={n}")
    if variant == "default":
        size = f + 1
    elif variant == "tight":
        size = f + 2
        if n < f + 2:
            raise ScenarioError(f"the tight variant needs n >= f + 2, got f={f}, n={n}")
    else:
        raise ScenarioError(f"unknown crash scatter variant {variant!r}")
    phi = [sct_id(i, size) for i in range(1, size + 1)]
    crashed = phi[1:f + 1]
    live = [phi[0]] * (n - f)
    if variant == "tight":
        live[-1] = phi[-1]
    world = build_world([ORIGIN] * n, crashed + live, _identity_frames(n),
                        FaultPlan({i: 0 for i in range(f)}))
    goal = GoalPredicate.scatter_at_least(2)
    expectation = Expectation.must_stay_below(2, horizon) if variant == "default" \
        else Expectation.must_reach(horizon)
    return Scenario("crash_scatter_lower_bound", dict(f=f, n=n, variant=variant), world,
                    FsyncScheduler(), goal, expectation)


def fgp_crash_stuck(n: int = 4, variant: str = "crash", horizon: int = DEFAULT_HORIZON) -> Scenario:
    """n - 1 robots at q1 and one at q2, all running 2gat; the q2 robot crashes."""
    if n < 3:
        raise ScenarioError(f"fgp_crash_stuck needs n >= 3, got {n}")
    q1, q2 = ORIGIN, Point(Fraction(3), Fraction(1))
    positions = [q1] * (n - 1) + [q2]
    if variant == "crash":
        faults = FaultPlan({n - 1: 0})
        goal, expectation = GoalPredicate.gather_all_at_most(1), Expectation.must_not_change(horizon)
    elif variant == "no_crash":
        faults = FaultPlan()
        goal, expectation = GoalPredicate.gather_at_most(1), Expectation.must_reach(horizon)
    else:
        raise ScenarioError(f"unknown fgp variant {variant!r}")
    world = build_world(positions, [TWO_GAT] * n, _random_frames(0, n), faults)
    return Scenario("fgp_crash_stuck", dict(n=n, variant=variant), world, FsyncScheduler(), goal, expectation)


# ───── solvability runs

def scatter_solvable(c: int = 3, n: int = 6, seed: int = 0, horizon: int = 500,
                     stability: int = 50, box: int = 1) -> Scenario:
    """cSCTA from a random crowded start under a fair random scheduler."""
    if not 1 <= c <= n:
        raise ScenarioError(f"need 1 <= c <= n, got c={c}, n={n}")
    rng = random.Random(derive_seed(seed, "initial"))
    positions = list(random_configuration(rng, n, box=box).points)
    rng.shuffle(positions)
    assignment = _sampled_assignment(algorithms.scatter_algorithm(c), n, seed)
    world = build_world(positions, assignment, _random_frames(seed, n))
    return Scenario("scatter_solvable", dict(c=c, n=n, seed=seed), world,
                    FairRandomScheduler(derive_seed(seed, "scheduler")),
                    GoalPredicate.scatter_at_least(c), Expectation.must_reach(horizon, stability))


def gata_gathers(n: int = 4, seed: int = 0, start: str = "bivalent", horizon: int = 2000) -> Scenario:
    if start == "bivalent":
        if n % 2:
            raise ScenarioError(f"a bivalent start needs an even n, got {n}")
        positions = bivalent_positions(n)
    elif start == "random":
        positions = list(random_configuration(random.Random(derive_seed(seed, "initial")), n).points)
    else:
        raise ScenarioError(f"unknown start {start!r}")
    assignment = _sampled_assignment(algorithms.gathering_algorithm(), n, seed)
    world = build_world(positions, assignment, _random_frames(seed, n))
    return Scenario("gata_gathers", dict(n=n, seed=seed, start=start), world,
                    FairRandomScheduler(derive_seed(seed, "scheduler")),
                    GoalPredicate.gather_at_most(1), Expectation.must_reach(horizon))


def random_fault_plan(seed: int, n: int, f: int, latest: int) -> FaultPlan:
    """Crash f distinct robots at times in [0, latest]."""
    rng = random.Random(derive_seed(seed, "crashes"))
    victims = rng.sample(range(n), f)
    return FaultPlan({robot_id: rng.randint(0, latest) for robot_id in sorted(victims)})


def sgta_gathers_with_crashes(n: int = 5, f: int = 2, seed: int = 0, start: str = "random",
                              horizon: int = 3000) -> Scenario:
    if not 0 <= f <= n - 1:
        raise ScenarioError(f"need 0 <= f <= n - 1, got f={f}, n={n}")
    if start == "bivalent":
        positions = bivalent_positions(n)
    elif start == "random":
        positions = list(random_configuration(random.Random(derive_seed(seed, "initial")), n).points)
    else:
        raise ScenarioError(f"unknown start {start!r}")
    assignment = _sampled_assignment(algorithms.symmetric_gathering_algorithm(), n, seed)
    world = build_world(positions, assignment, _random_frames(seed, n),
                        random_fault_plan(seed, n, f, latest=20))
    return Scenario("sgta_gathers_with_crashes", dict(n=n, f=f, seed=seed, start=start), world,
                    FairRandomScheduler(derive_seed(seed, "scheduler")),
                    GoalPredicate.gather_non_faulty(), Expectation.must_reach(horizon))


def pattern_formation(n: int = 4, pattern="polygon", seed: int = 0, horizon: int = 5000) -> Scenario:
    goal_pattern = resolve_pattern(pattern, n)
    if len(goal_pattern) != n:
        raise ScenarioError(f"pattern has {len(goal_pattern)} points for {n} robots")
    rng = random.Random(derive_seed(seed, "initial"))
    positions = list(random_configuration(rng, n).points)
    phi = list(algorithms.pattern_formation_algorithm(goal_pattern))
    random.Random(derive_seed(seed, "assignment")).shuffle(phi)
    world = build_world(positions, phi, _random_frames(seed, n))
    label = pattern if isinstance(pattern, str) else "custom"
    return Scenario("pattern_formation", dict(n=n, pattern=label, seed=seed), world,
                    FairRandomScheduler(derive_seed(seed, "scheduler")),
                    GoalPredicate.pattern_similar(goal_pattern), Expectation.must_reach(horizon))


def fault_tolerant_scatter(c: int = 3, f: int = 2, n: int = 6, seed: int = 0,
                           horizon: int = 500) -> Scenario:
    """FT-SCTA from a single point with f robots crashed there at time 0."""
    phi = algorithms.fault_tolerant_scatter_algorithm(c, f)
    if len(phi) > n or f > n - 1:
        raise ScenarioError(f"{len(phi)} functions and {f} crashes do not fit {n} robots")
    assignment = _sampled_assignment(phi, n, seed)
    rng = random.Random(derive_seed(seed, "crashes"))
    faults = FaultPlan({robot_id: 0 for robot_id in sorted(rng.sample(range(n), f))})
    world = build_world([ORIGIN] * n, assignment, _random_frames(seed, n), faults)
    return Scenario("fault_tolerant_scatter", dict(c=c, f=f, n=n, seed=seed), world,
                    FairRandomScheduler(derive_seed(seed, "scheduler")),
                    GoalPredicate.scatter_at_least(c), Expectation.must_reach(horizon))


REGISTRY: Dict[str, Callable[..., Scenario]] = {
    "scatter_lower_bound": scatter_lower_bound,
    "bivalent_stasis": bivalent_stasis,
    "clone_symmetric_failure": clone_symmetric_failure,
    "crash_scatter_lower_bound": crash_scatter_lower_bound,
    "fgp_crash_stuck": fgp_crash_stuck,
    "scatter_solvable": scatter_solvable,
    "gata_gathers": gata_gathers,
    "sgta_gathers_with_crashes": sgta_gathers_with_crashes,
    "pattern_formation": pattern_formation,
    "fault_tolerant_scatter": fault_tolerant_scatter,
}

# Parameterizations run by the suite.
SUITE: List[Tuple[str, Dict[str, object]]] = [
    ("scatter_lower_bound", dict(c=3, m=2, n=4)),
    ("scatter_lower_bound", dict(c=4, m=3, n=4)),
    ("bivalent_stasis", dict(n=4)),
    ("bivalent_stasis", dict(n=6)),
    ("bivalent_stasis", dict(n=4, algorithm="gata")),
    ("clone_symmetric_failure", dict(variant="clones")),
    ("clone_symmetric_failure", dict(variant="gat2")),
    ("clone_symmetric_failure", dict(variant="sgta")),
    ("crash_scatter_lower_bound", dict(f=2, n=5)),
    ("crash_scatter_lower_bound", dict(f=2, n=5, variant="tight")),
    ("fgp_crash_stuck", dict(n=4)),
    ("fgp_crash_stuck", dict(n=4, variant="no_crash")),
    ("scatter_solvable", dict(c=3, n=6, seed=1)),
    ("gata_gathers", dict(n=4, seed=1)),
    ("sgta_gathers_with_crashes", dict(n=5, f=2, seed=1)),
    ("pattern_formation", dict(n=4, seed=1)),
    ("fault_tolerant_scatter", dict(c=3, f=2, n=6, seed=1)),
]


def build_scenario(name: str, **params) -> Scenario:
    try:
        builder = REGISTRY[name]
    except KeyError:
        raise ScenarioError(f"unknown scenario: {name!r}") from None
    try:
        return builder(**params)
    except TypeError as e:
        raise ScenarioError(f"bad parameters for {name}: {e}") from None


def select_suite(pattern: str = "*") -> List[Tuple[str, Dict[str, object]]]:
    """Suite entries whose scenario name matches a glob; unknown names are an error."""
    chosen = [entry for entry in SUITE if fnmatch.fnmatchcase(entry[0], pattern)]
    if not chosen:
        raise ScenarioError(f"no scenario matches {pattern!r}")
    return chosen


# ───── checking

def _support_sizes(trace: ExecutionTrace) -> List[int]:
    return [len(set(step.positions)) for step in trace.steps]


def check_expectation(expectation: Expectation, trace: ExecutionTrace) -> Tuple[bool, str]:
    """
    Decide an expectation from the trace. Must-not-change and must-stay-below
    also fail when the run reaches its goal.
    """
    verdict = trace.verdict
    if expectation.kind is ExpectationKind.MUST_REACH:
        if verdict.kind is not VerdictKind.REACHED:
            return False, f"goal not reached: {verdict}"
        if expectation.stability_window and not trace.goal_stable:
            return False, f"goal reached at {verdict.time} but lost within {expectation.stability_window} steps"
        return True, f"goal reached at {verdict.time}"
    first = trace.steps[0].config
    if expectation.kind is ExpectationKind.MUST_CHANGE:
        for step in trace.steps[1:]:
            if step.config != first:
                return True, f"configuration changed at {step.time}"
        return False, f"configuration unchanged for {trace.final.time} steps"
    if verdict.kind is VerdictKind.REACHED:
        return False, f"goal reached at {verdict.time}"
    if expectation.kind is ExpectationKind.MUST_NOT_CHANGE:
        for step in trace.steps[1:]:
            if step.config != first:
                return False, f"configuration changed at {step.time}"
        return True, f"configuration unchanged for {trace.final.time} steps"
    sizes = _support_sizes(trace)
    worst = max(sizes)
    if worst >= expectation.bound:
        return False, f"support reached {worst} at {trace.steps[sizes.index(worst)].time}"
    return True, f"support stayed at most {worst} for {trace.final.time} steps"


def run_scenario(scenario: Scenario, cfg: ToleranceConfig = DEFAULT_TOLERANCE,
                 horizon: Optional[int] = None) -> ScenarioResult:
    expectation = scenario.expectation
    horizon = horizon or expectation.horizon
    trace = run(scenario.world, scenario.scheduler, scenario.goal, horizon,
                stability_window=0 if expectation.is_negative else expectation.stability_window,
                cfg=cfg, stop_on_stasis=not expectation.is_negative)
    passed, message = check_expectation(expectation, trace)
    logger.info("%s %s: %s", scenario.label, "passed" if passed else "FAILED", message)
    return ScenarioResult(scenario, passed, message, trace)
