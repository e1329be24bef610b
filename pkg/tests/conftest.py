"""
Shared fixtures: the equilateral example configurations and a few
hypothesis strategies for rational configurations.
"""

from fractions import Fraction

import pytest
from hypothesis import strategies as st

from swarmkit.geom import Configuration, Point, point, sqrt_approx


def equilateral():
    """Triangle inscribed in the unit circle; exact up to sqrt_approx(3)."""
    s = sqrt_approx(3)
    a = Point(Fraction(1), Fraction(0))
    b = Point(Fraction(-1, 2), s / 2)
    c = Point(Fraction(-1, 2), -s / 2)
    o = Configuration.of([a, b, c]).sec.center
    return a, b, c, o


@pytest.fixture
def triangle():
    return equilateral()


@pytest.fixture
def example_configurations(triangle):
    a, b, c, o = triangle
    return {
        "P1": Configuration.of([a, b, c]),
        "P2": Configuration.of([a, a, b, b, c]),
        "P3": Configuration.of([a, a, b, b, c, c]),
        "P4": Configuration.of([a, b, c, o, o]),
        "P5": Configuration.of([a, b, c, o, o, o]),
        "P6": Configuration.of([o, o, o]),
    }


@pytest.fixture
def view_example():
    """Five points around the unit circle centred at the origin."""
    return {
        "o": point(0, 0),
        "a": point("-1/2", "1/2"),
        "b": point(1, 0),
        "c": point(0, 1),
        "d": point(0, -1),
    }


def integer_points(box=6):
    return st.builds(point, st.integers(-box, box), st.integers(-box, box))


def integer_configurations(min_size=1, max_size=8, box=6):
    return st.lists(integer_points(box), min_size=min_size, max_size=max_size).map(Configuration.of)


def rational_points(box=20, max_den=7):
    coordinate = st.fractions(min_value=-box, max_value=box, max_denominator=max_den)
    return st.builds(Point, coordinate, coordinate)
