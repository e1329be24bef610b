from fractions import Fraction

import pytest

from swarmkit import spec_format
from swarmkit.engine import GoalKind, GoalPredicate, derive_seed
from swarmkit.errors import SpecParseError
from swarmkit.geom import ORIGIN, Configuration, point, regular_polygon
from swarmkit.scenarios import Expectation, ExpectationKind
from swarmkit.schedulers import FairRandomScheduler
from swarmkit.targets import gat_id


def parse(text):
    return spec_format.parse_run_spec(text, "test.spec")


class TestRunSpec:
    def test_module_example(self):
        spec = parse(spec_format.__doc__.split("::", 1)[1])
        assert spec.algorithm == "gata"
        assert spec.n == 4
        assert spec.frames == {"kind": "random", "seed": "4"}
        jobs = spec_format.materialize(spec)
        assert len(jobs) == 1
        job = jobs[0]
        assert job.world.assignment == (gat_id(1), gat_id(2), gat_id(1), gat_id(2))
        assert job.world.positions == (ORIGIN, ORIGIN, point(1, 0), point(1, 0))
        assert job.goal == GoalPredicate.gather_at_most(1)
        assert job.horizon == 2000
        assert isinstance(job.scheduler, FairRandomScheduler)
        assert job.scheduler.bound == 10

    def test_comments_and_blank_lines(self):
        spec = parse("# a comment\n\nalgorithm: 2gata   # trailing\nn: 3\n")
        assert (spec.algorithm, spec.n) == ("2gata", 3)

    def test_json(self):
        spec = parse('{"algorithm": "2gata", "points": [[0, 0], [1, 0], ["1/2", 3]], "horizon": 10}')
        assert spec.points == [ORIGIN, point(1, 0), point("1/2", 3)]
        job, = spec_format.materialize(spec)
        assert job.horizon == 10

    def test_explicit_frames(self):
        spec = parse("algorithm: 2gata\npoint: 0 0\npoint: 1 0\nframe: 0 1\nframe: 1/3 2\n")
        job, = spec_format.materialize(spec)
        first, second = (robot.frame for robot in job.world.robots)
        assert first.to_global(point(1, 0)) == point(1, 0)
        assert second.position == point(1, 0)

    def test_scripted_scheduler(self):
        spec = parse("algorithm: 2gata\nn: 3\nscheduler: scripted {0,1} {2}\n")
        job, = spec_format.materialize(spec)
        assert job.scheduler.describe() == "scripted {0,1} {2}"

    def test_all_surjections(self):
        spec = parse("algorithm: gata\nn: 4\ninitial: gathered\nassignment: all-surjections\n")
        jobs = spec_format.materialize(spec)
        assert len(jobs) == 14
        assert len({job.world.assignment for job in jobs}) == 14
        assert all(job.world.config == Configuration.of([ORIGIN] * 4) for job in jobs)

    def test_default_goals(self):
        cases = {"3scta": GoalPredicate.scatter_at_least(3),
                 "ft-scta:2,1": GoalPredicate.scatter_at_least(2),
                 "sgta": GoalPredicate.gather_non_faulty(),
                 "clone": GoalPredicate.gather_at_most(1)}
        for algorithm, goal in cases.items():
            job, = spec_format.materialize(parse(f"algorithm: {algorithm}\nn: 4\n"))
            assert job.goal == goal

    def test_pattern_goal(self):
        job, = spec_format.materialize(parse("algorithm: pfa\nn: 5\npattern: polygon\n"))
        assert job.goal.kind is GoalKind.PATTERN_SIMILAR
        assert job.goal.pattern == regular_polygon(5)

    def test_crashes_and_expectation(self):
        spec = parse("algorithm: 2gata\nn: 4\ncrash: 1 0\ncrash: 3 5\nfault-bound: 2\n"
                     "expect: stay-below 3\nhorizon: 40\n")
        job, = spec_format.materialize(spec)
        assert [r.crashed_at for r in job.world.robots] == [None, 0, None, 5]
        assert job.expectation == Expectation.must_stay_below(3, 40)

    def test_overrides(self):
        job, = spec_format.materialize(parse("algorithm: 2gata\nn: 3\nhorizon: 40\nstability: 2\n"),
                                       horizon=7, stability=0)
        assert (job.horizon, job.stability) == (7, 0)

    def test_initial_generator_is_seeded(self):
        text = "algorithm: 2gata\nn: 6\ninitial: random box=4 distinct\n"
        first, = spec_format.materialize(parse(text), master_seed=11)
        second, = spec_format.materialize(parse(text), master_seed=11)
        assert first.world.positions == second.world.positions
        assert first.world.config.m == 6


class TestRunSpecErrors:
    @pytest.mark.parametrize("text", [
        "algorithm: 2gata\nn: 3\ncolour: red\n",
        "n: 3\n",
        "algorithm: 2gata\n",
        "algorithm: 2gata\nn: 3\npoint: 0 0\n",
        "algorithm: 2gata\njust words\n",
        "algorithm: 2gata\nn: three\n",
        "algorithm: 2gata\npoint: 0\n",
        "algorithm: 2gata\nn: 2\nframe: 0 1\n",
        "algorithm: 2gata\nn: 2\nhorizon: 0\n",
        "algorithm: 2gata\nn: 3\ncrash: 0 0\ncrash: 1 0\nfault-bound: 1\n",
        "algorithm: 2gata\npoint: 0 0\ninitial: random\n",
        '{"algorithm": ',
        "[1, 2]",
    ])
    def test_parse_rejects(self, text):
        with pytest.raises(SpecParseError):
            parse(text)

    @pytest.mark.parametrize("text", [
        "algorithm: warp\nn: 3\n",
        "algorithm: gata\nn: 4\nassignment: gat:1 gat:1 gat:1 gat:1\n",
        "algorithm: gata\nn: 4\nassignment: gat:1 gat:2\n",
        "algorithm: 2gata\nn: 3\nscheduler: fair-random p=2\n",
        "algorithm: 2gata\nn: 3\ninitial: spiral\n",
        "algorithm: 2gata\nn: 3\nframes: skewed\n",
        "algorithm: 2gata\nn: 3\ncrash: 5 0\n",
        "algorithm: 2gata\nn: 3\nexpect: sometimes\n",
    ])
    def test_materialize_rejects(self, text):
        with pytest.raises(SpecParseError):
            spec_format.materialize(parse(text))


class TestSeeds:
    def test_precedence(self):
        spec = parse("algorithm: 2gata\nn: 3\n")
        assert spec_format.stream_seed(spec, "initial", "7", None) == 7
        assert spec_format.stream_seed(spec, "initial", "7", 5) == derive_seed(5, "initial")
        assert spec_format.stream_seed(spec, "initial", None, None) == derive_seed(0, "initial")
        spec = parse("algorithm: 2gata\nn: 3\nseed: 9\n")
        assert spec_format.stream_seed(spec, "frames", None, None) == derive_seed(9, "frames")

    def test_tolerance(self):
        cfg = spec_format.tolerance_for(parse("algorithm: 2gata\nn: 3\neps: 1/1000\nsqrt-bits: 64\n"))
        assert (cfg.rel_eps, cfg.sqrt_precision) == (Fraction(1, 1000), 64)
        with pytest.raises(SpecParseError):
            spec_format.tolerance_for(parse("algorithm: 2gata\nn: 3\neps: -1\n"))


class TestGoalsAndExpectations:
    def test_parse_goal(self):
        assert spec_format.parse_goal("scatter-at-least 3") == GoalPredicate.scatter_at_least(3)
        assert spec_format.parse_goal("gather-all-at-most 2") == GoalPredicate.gather_all_at_most(2)
        assert spec_format.parse_goal("gather-non-faulty") == GoalPredicate.gather_non_faulty()
        pattern = regular_polygon(4)
        assert spec_format.parse_goal("pattern-similar", pattern) == GoalPredicate.pattern_similar(pattern)

    @pytest.mark.parametrize("text", ["", "teleport 1", "gather-at-most", "pattern-similar", "scatter-at-least x"])
    def test_parse_goal_rejects(self, text):
        with pytest.raises(SpecParseError):
            spec_format.parse_goal(text)

    def test_parse_expectation(self):
        assert spec_format.parse_expectation([], 10, 3) == Expectation.must_reach(10, 3)
        assert spec_format.parse_expectation(["not-change"], 10, 3).kind is ExpectationKind.MUST_NOT_CHANGE
        assert spec_format.parse_expectation(["change"], 10, 3) == Expectation.must_change(10)
        assert spec_format.parse_expectation(["stay-below", "4"], 10, 0).bound == 4
        with pytest.raises(SpecParseError):
            spec_format.parse_expectation(["stay-below"], 10, 0)


class TestConfigurationFiles:
    def test_text(self):
        config, query = spec_format.parse_configuration(
            "# square\n0 0\n1,0\npoint: 0 1\n1/1 1\nquery: 1 0\n")
        assert config == Configuration.from_pairs([(0, 0), (1, 0), (0, 1), (1, 1)])
        assert query == point(1, 0)

    def test_json(self):
        config, query = spec_format.parse_configuration('{"points": [[0, 0], [2, 0]], "query": [2, 0]}')
        assert config.m == 2
        assert query == point(2, 0)

    @pytest.mark.parametrize("text", ["", "# nothing\n", "color: 1 2\n", "0 0 0\n", '{"points": [], "size": 3}'])
    def test_rejects(self, text):
        with pytest.raises(SpecParseError):
            spec_format.parse_configuration(text)
