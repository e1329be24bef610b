"""
Activation schedulers for the semi-synchronous model.

A scheduler is asked once per time instant which robots act. Schedulers keep
their own state (a seeded RNG, idle counters, a script cursor), so a fresh
instance is needed per execution.
"""

import logging
import random
from abc import ABC, abstractmethod
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence

from .errors import SchedulerError
from .geom import to_scalar

logger = logging.getLogger(__name__)


class Scheduler(ABC):
    kind: str = ""

    @abstractmethod
    def activate(self, world) -> FrozenSet[int]:
        """Robot ids activated at world.time."""

    def describe(self) -> str:
        return self.kind


class FsyncScheduler(Scheduler):
    kind = "fsync"

    def activate(self, world) -> FrozenSet[int]:
        return frozenset(range(len(world.robots)))


class FairRandomScheduler(Scheduler):
    """
    Activates each robot independently with probability p, and always
    activates a robot that has been idle for ``bound`` consecutive steps.
    """
    kind = "fair-random"

    def __init__(self, seed: int, p=Fraction(1, 2), bound: int = 10):
        p = to_scalar(p)
        if not 0 < p <= 1:
            raise SchedulerError(f"activation probability must be in (0, 1], got {p}")
        if bound < 1:
            raise SchedulerError(f"fairness bound must be at least 1, got {bound}")
        self.seed = seed
        self.p = p
        self.bound = bound
        self._rng = random.Random(seed)
        self._idle: Dict[int, int] = {}

    def activate(self, world) -> FrozenSet[int]:
        chosen = set()
        for robot_id in range(len(world.robots)):
            # draw for every robot so the stream does not depend on idle counters
            lucky = self._rng.random() < self.p
            if lucky or self._idle.get(robot_id, 0) >= self.bound:
                chosen.add(robot_id)
                self._idle[robot_id] = 0
            else:
                self._idle[robot_id] = self._idle.get(robot_id, 0) + 1
        return frozenset(chosen)

    def idle_steps(self, robot_id: int) -> int:
        return self._idle.get(robot_id, 0)

    def describe(self) -> str:
        return f"{self.kind} seed={self.seed} p={self.p} bound={self.bound}"


class CentralRoundRobinScheduler(Scheduler):
    """Exactly one robot per step, in id order."""
    kind = "central"

    def __init__(self):
        self._next = 0

    def activate(self, world) -> FrozenSet[int]:
        robot_id = self._next % len(world.robots)
        self._next += 1
        return frozenset([robot_id])


class ScriptedScheduler(Scheduler):
    """Replays a fixed list of activation sets, repeating it forever."""
    kind = "scripted"

    def __init__(self, script: Sequence[Iterable[int]]):
        self.script: List[FrozenSet[int]] = [frozenset(entry) for entry in script]
        if not self.script:
            raise SchedulerError("a scripted schedule needs at least one activation set")
        self._cursor = 0

    def activate(self, world) -> FrozenSet[int]:
        chosen = self.script[self._cursor % len(self.script)]
        self._cursor += 1
        unknown = [i for i in chosen if not 0 <= i < len(world.robots)]
        if unknown:
            raise SchedulerError(f"script activates unknown robots {sorted(unknown)}")
        return chosen

    def describe(self) -> str:
        sets = " ".join("{" + ",".join(str(i) for i in sorted(entry)) + "}" for entry in self.script)
        return f"{self.kind} {sets}"


def make_scheduler(kind: str, seed: int = 0, p=Fraction(1, 2), bound: int = 10,
                   script: Optional[Sequence[Iterable[int]]] = None) -> Scheduler:
    """
    Create a scheduler by name.

    Args:
        kind: One of fsync, fair-random, central, scripted
        seed: Seed of the fair-random scheduler
        p: Activation probability of the fair-random scheduler
        bound: Fairness bound of the fair-random scheduler
        script: Activation sets of the scripted scheduler

    Returns:
        Scheduler: A fresh scheduler instance
    """
    kind = kind.strip().lower()
    if kind == FsyncScheduler.kind:
        return FsyncScheduler()
    if kind in (FairRandomScheduler.kind, "fairrandom", "random"):
        return FairRandomScheduler(seed, p, bound)
    if kind in (CentralRoundRobinScheduler.kind, "round-robin", "roundrobin"):
        return CentralRoundRobinScheduler()
    if kind == ScriptedScheduler.kind:
        return ScriptedScheduler(script or [])
    raise SchedulerError(f"unknown scheduler kind: {kind!r}")
