import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import integer_configurations, integer_points, rational_points
from swarmkit.errors import GeometryError
from swarmkit.geom import (ORIGIN, Circle, Configuration, Point, SimilarityTransform, ToleranceConfig,
                           angle_cmp, circumcircle, format_scalar, is_linear, is_similar,
                           max_pairwise_sq_distance, min_pairwise_sq_distance, point, random_configuration,
                           polygon_half_angle, regular_polygon, sq_dist, sqrt_approx, to_scalar)
from swarmkit.symmetry import rotation_order


class TestScalars:
    @pytest.mark.parametrize("text,expected", [
        ("3/4", Fraction(3, 4)),
        ("-2", Fraction(-2)),
        ("0.25", Fraction(1, 4)),
        (" 7/14 ", Fraction(1, 2)),
        (5, Fraction(5)),
    ])
    def test_to_scalar(self, text, expected):
        assert to_scalar(text) == expected

    @pytest.mark.parametrize("bad", ["1/0", "abc", "", None, True])
    def test_to_scalar_rejects(self, bad):
        with pytest.raises(GeometryError):
            to_scalar(bad)

    def test_format_scalar_always_has_a_denominator(self):
        assert format_scalar(Fraction(3)) == "3/1"
        assert format_scalar(Fraction(-6, 4)) == "-3/2"

    def test_point_str(self):
        assert str(point("1/2", -3)) == "(1/2, -3)"


class TestConfiguration:
    def test_equal_multisets_compare_equal(self):
        a = Configuration.from_pairs([(1, 0), (0, 0), (1, 0)])
        b = Configuration.from_pairs([(1, 0), (1, 0), (0, 0)])
        assert a == b
        assert hash(a) == hash(b)
        assert a.m == 2
        assert a.multiplicity(point(1, 0)) == 2
        assert not a.is_set

    def test_without_removes_one_occurrence(self):
        config = Configuration.from_pairs([(0, 0), (0, 0), (2, 0)])
        assert config.without(ORIGIN) == Configuration.from_pairs([(0, 0), (2, 0)])
        assert config.without_all(ORIGIN) == Configuration.from_pairs([(2, 0)])
        with pytest.raises(GeometryError):
            config.without(point(5, 5))

    def test_sec_of_empty_configuration(self):
        with pytest.raises(GeometryError):
            Configuration(()).sec

    def test_pairwise_distances(self):
        config = Configuration.from_pairs([(0, 0), (3, 4), (3, 0)])
        assert min_pairwise_sq_distance(config) == 9
        assert max_pairwise_sq_distance(config) == 25
        with pytest.raises(GeometryError):
            min_pairwise_sq_distance(Configuration.from_pairs([(1, 1), (1, 1)]))

    def test_is_linear(self):
        assert is_linear(Configuration.from_pairs([(0, 0), (1, 1), (3, 3), (3, 3)]))
        assert not is_linear(Configuration.from_pairs([(0, 0), (1, 1), (3, 2)]))


def _brute_force_sec(config: Configuration) -> Circle:
    support = config.support
    if len(support) == 1:
        return Circle(support[0], Fraction(0))
    candidates = []
    for a, b in combinations(support, 2):
        center = Point((a.x + b.x) / 2, (a.y + b.y) / 2)
        candidates.append(Circle(center, sq_dist(center, a)))
    for a, b, c in combinations(support, 3):
        circle = circumcircle(a, b, c)
        if circle is not None:
            candidates.append(circle)
    enclosing = [c for c in candidates if all(c.contains(p) for p in support)]
    return min(enclosing, key=lambda c: c.sq_radius)


class TestSmallestEnclosingCircle:
    def test_examples(self):
        assert Configuration.from_pairs([(0, 0), (2, 0)]).sec == Circle(point(1, 0), Fraction(1))
        # the obtuse vertex is inside the diameter circle
        assert Configuration.from_pairs([(0, 0), (4, 0), (2, 1)]).sec == Circle(point(2, 0), Fraction(4))
        assert Configuration.from_pairs([(3, 3)] * 3).sec == Circle(point(3, 3), Fraction(0))

    @settings(max_examples=500, deadline=None)
    @given(integer_configurations(max_size=8, box=10))
    def test_matches_brute_force(self, config):
        expected = _brute_force_sec(config)
        actual = config.sec
        assert actual.sq_radius == expected.sq_radius
        assert actual.center == expected.center
        assert all(actual.contains(p) for p in config)


class TestSqrtApprox:
    @pytest.mark.parametrize("s", [0, 1, 4, Fraction(81, 16), 10 ** 6])
    def test_exact_on_squares(self, s):
        root = sqrt_approx(s)
        assert root * root == s
        assert sqrt_approx(s, upper=True) == root

    def test_negative(self):
        with pytest.raises(GeometryError):
            sqrt_approx(-1)

    @settings(max_examples=300, deadline=None)
    @given(st.fractions(min_value=0, max_value=10 ** 6, max_denominator=10 ** 6).filter(lambda s: s > 0))
    def test_precision(self, s):
        cfg = ToleranceConfig()
        lower = sqrt_approx(s, cfg)
        upper = sqrt_approx(s, cfg, upper=True)
        bound = s / 2 ** cfg.sqrt_precision
        assert lower * lower <= s <= upper * upper
        assert s - lower * lower <= bound
        assert upper * upper - s <= bound

    @settings(max_examples=300, deadline=None)
    @given(st.fractions(min_value=0, max_value=1000, max_denominator=1000),
           st.fractions(min_value=0, max_value=1000, max_denominator=1000))
    def test_monotone(self, a, b):
        a, b = min(a, b), max(a, b)
        assert sqrt_approx(a) <= sqrt_approx(b)
        assert sqrt_approx(a, upper=True) <= sqrt_approx(b, upper=True)

    def test_monotone_across_powers_of_four(self):
        for e in range(-6, 7):
            edge = Fraction(4) ** e
            just_below = edge - Fraction(1, 10 ** 9)
            assert sqrt_approx(just_below) <= sqrt_approx(edge)


def test_angle_cmp():
    center = ORIGIN
    assert angle_cmp(center, point(1, 0), point(0, 1)) == -1
    assert angle_cmp(center, point(0, -1), point(-1, 0)) == 1
    assert angle_cmp(center, point(1, 1), point(2, 2)) == 0
    with pytest.raises(GeometryError):
        angle_cmp(center, ORIGIN, point(1, 0))


class TestSimilarity:
    def test_inverse(self):
        t = SimilarityTransform.from_multiplier(point(3, 4), point(1, -2))
        assert t.scale == 5
        p = point("1/3", 7)
        assert t.inverse().apply(t.apply(p)) == p

    @settings(max_examples=200, deadline=None)
    @given(integer_configurations(min_size=2, max_size=6),
           st.tuples(st.integers(-5, 5), st.integers(-5, 5)).filter(lambda m: m != (0, 0)),
           rational_points())
    def test_finds_the_similarity(self, G, multiplier, offset):
        P = G.map(lambda z: point(*multiplier).times(z) + offset)
        found = is_similar(P, G)
        if G.m == 1:
            assert found is not None
            return
        assert found is not None
        assert found.apply_all(G) == P

    def test_rejects_a_mirror_image(self):
        triangle = Configuration.from_pairs([(0, 0), (4, 0), (0, 1)])
        assert is_similar(triangle.map(Point.conjugate), triangle) is None

    def test_rejects_a_rectangle_for_a_square(self):
        square = Configuration.from_pairs([(0, 0), (1, 0), (0, 1), (1, 1)])
        rectangle = Configuration.from_pairs([(0, 0), (2, 0), (0, 1), (2, 1)])
        assert is_similar(rectangle, square) is None

    def test_multiplicities_must_match(self):
        G = Configuration.from_pairs([(0, 0), (0, 0), (1, 0)])
        P = Configuration.from_pairs([(0, 0), (1, 0), (1, 0)])
        assert is_similar(Configuration.from_pairs([(5, 5), (5, 5), (7, 5)]), G) is not None
        # the doubled point is the other end
        assert is_similar(P, G) is not None
        assert is_similar(Configuration.from_pairs([(0, 0), (1, 0), (2, 0)]), G) is None

    def test_size_mismatch(self):
        with pytest.raises(GeometryError):
            is_similar(Configuration.from_pairs([(0, 0)]), Configuration.from_pairs([(0, 0), (1, 0)]))


class TestGenerators:
    def test_square_is_exact(self):
        square = regular_polygon(4)
        assert square == Configuration.from_pairs([(1, 0), (0, 1), (-1, 0), (0, -1)])

    @pytest.mark.parametrize("n", [3, 5, 6, 8])
    def test_vertices_lie_on_the_circle(self, n):
        polygon = regular_polygon(n, radius=2)
        assert len(polygon) == n and polygon.is_set
        assert all(p.norm2() == 4 for p in polygon)

    @pytest.mark.parametrize("n", range(2, 9))
    def test_polygon_has_full_rotation_order(self, n):
        assert rotation_order(regular_polygon(n)) == n
        assert rotation_order(regular_polygon(n, radius="3/2")) == n

    def test_half_angle_tangent(self):
        assert polygon_half_angle(4) == 1
        third = polygon_half_angle(3)
        assert abs(third * third - 3) < Fraction(1, 2 ** 120)
        with pytest.raises(GeometryError):
            polygon_half_angle(2)

    def test_random_configuration(self):
        config = random_configuration(random.Random(3), 9, box=1, distinct=True)
        assert config.is_set and len(config) == 9
        with pytest.raises(GeometryError):
            random_configuration(random.Random(3), 10, box=1, distinct=True)

    def test_random_configuration_is_seeded(self):
        assert random_configuration(random.Random(8), 5) == random_configuration(random.Random(8), 5)


@given(integer_points(), integer_points())
def test_sq_dist_symmetric(p, q):
    assert sq_dist(p, q) == sq_dist(q, p) == (p - q).norm2()
