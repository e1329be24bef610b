from fractions import Fraction

import pytest

from swarmkit.engine import build_world
from swarmkit.errors import SchedulerError
from swarmkit.geom import point
from swarmkit.schedulers import (CentralRoundRobinScheduler, FairRandomScheduler, FsyncScheduler,
                                 ScriptedScheduler, make_scheduler)
from swarmkit.targets import TWO_GAT


@pytest.fixture
def world():
    return build_world([point(i, 0) for i in range(5)], [TWO_GAT] * 5)


def test_fsync(world):
    assert FsyncScheduler().activate(world) == frozenset(range(5))


def test_round_robin(world):
    scheduler = CentralRoundRobinScheduler()
    sets = [scheduler.activate(world) for _ in range(7)]
    assert sets == [{0}, {1}, {2}, {3}, {4}, {0}, {1}]


class TestFairRandom:
    @pytest.mark.parametrize("seed", range(10))
    def test_fairness_bound(self, world, seed):
        scheduler = FairRandomScheduler(seed, p=Fraction(1, 10), bound=4)
        idle = [0] * 5
        for _ in range(300):
            chosen = scheduler.activate(world)
            for robot_id in range(5):
                idle[robot_id] = 0 if robot_id in chosen else idle[robot_id] + 1
                assert idle[robot_id] <= 4
                assert scheduler.idle_steps(robot_id) == idle[robot_id]

    def test_reproducible(self, world):
        a = FairRandomScheduler(7)
        b = FairRandomScheduler(7)
        assert [a.activate(world) for _ in range(50)] == [b.activate(world) for _ in range(50)]

    def test_certain_activation(self, world):
        scheduler = FairRandomScheduler(0, p=1)
        assert all(scheduler.activate(world) == frozenset(range(5)) for _ in range(10))

    @pytest.mark.parametrize("p,bound", [(0, 10), (Fraction(3, 2), 10), (Fraction(1, 2), 0)])
    def test_invalid(self, p, bound):
        with pytest.raises(SchedulerError):
            FairRandomScheduler(0, p=p, bound=bound)

    def test_describe(self):
        assert FairRandomScheduler(3).describe() == "fair-random seed=3 p=1/2 bound=10"


class TestScripted:
    def test_repeats(self, world):
        scheduler = ScriptedScheduler([{0, 1}, {4}])
        assert [scheduler.activate(world) for _ in range(5)] == [{0, 1}, {4}, {0, 1}, {4}, {0, 1}]
        assert scheduler.describe() == "scripted {0,1} {4}"

    def test_empty_script(self):
        with pytest.raises(SchedulerError):
            ScriptedScheduler([])

    def test_unknown_robot(self, world):
        with pytest.raises(SchedulerError):
            ScriptedScheduler([{9}]).activate(world)


class TestMakeScheduler:
    @pytest.mark.parametrize("kind,cls", [
        ("fsync", FsyncScheduler),
        ("fair-random", FairRandomScheduler),
        ("random", FairRandomScheduler),
        ("central", CentralRoundRobinScheduler),
        ("Round-Robin", CentralRoundRobinScheduler),
    ])
    def test_kinds(self, kind, cls):
        assert isinstance(make_scheduler(kind), cls)

    def test_scripted(self, world):
        assert make_scheduler("scripted", script=[[2]]).activate(world) == {2}

    def test_unknown(self):
        with pytest.raises(SchedulerError):
            make_scheduler("async")
