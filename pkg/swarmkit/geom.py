"""
Exact 2-D geometry for robot configurations.

All coordinates are ``fractions.Fraction`` values. The only inexact operation is
``sqrt_approx``; everything else (smallest enclosing circle, collinearity,
angular order, similarity testing) is decided exactly on rational input and
with a relative tolerance once approximated values are involved.
"""

import logging
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from .errors import GeometryError

logger = logging.getLogger(__name__)

Scalar = Fraction
ScalarLike = Union[Fraction, int, str, float]


def to_scalar(value: ScalarLike) -> Scalar:
    """
    Convert a number or a "num/den" string to an exact Scalar.

    Args:
        value: An int, Fraction, float or string such as "3/4", "-2" or "0.25"

    Returns:
        Scalar: The exact rational value
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise GeometryError(f"not a number: {value!r}")
    try:
        return Fraction(value.strip() if isinstance(value, str) else value)
    except ZeroDivisionError:
        raise GeometryError(f"zero denominator in {value!r}") from None
    except (TypeError, ValueError, OverflowError):
        raise GeometryError(f"not a rational number: {value!r}") from None


def format_scalar(value: Scalar) -> str:
    """Serialize a Scalar as "numerator/denominator"."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True, order=True)
class Point:
    """A point of the plane; the generated ordering is the lexicographic order."""
    x: Scalar
    y: Scalar

    def __add__(self, other: "Point") -> "Point":
        return Point(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Point") -> "Point":
        return Point(self.x - other.x, self.y - other.y)

    def __neg__(self) -> "Point":
        return Point(-self.x, -self.y)

    def scaled(self, factor: Scalar) -> "Point":
        return Point(self.x * factor, self.y * factor)

    def dot(self, other: "Point") -> Scalar:
        return self.x * other.x + self.y * other.y

    def cross(self, other: "Point") -> Scalar:
        return self.x * other.y - self.y * other.x

    def norm2(self) -> Scalar:
        return self.x * self.x + self.y * self.y

    def times(self, other: "Point") -> "Point":
        """Product of the two points read as complex numbers."""
        return Point(self.x * other.x - self.y * other.y, self.x * other.y + self.y * other.x)

    def conjugate(self) -> "Point":
        return Point(self.x, -self.y)

    def __str__(self) -> str:
        return f"({pretty_scalar(self.x)}, {pretty_scalar(self.y)})"


def pretty_scalar(value: Scalar) -> str:
    value = Fraction(value)
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


ORIGIN = Point(Fraction(0), Fraction(0))


def point(x: ScalarLike, y: ScalarLike) -> Point:
    """Build a Point from anything ``to_scalar`` accepts."""
    return Point(to_scalar(x), to_scalar(y))


@dataclass(frozen=True)
class ToleranceConfig:
    """Numeric policy shared by every predicate that sees approximated values."""
    rel_eps: Scalar = Fraction(1, 2 ** 64)  # relative to the configuration diameter
    sqrt_precision: int = 128  # bits of relative precision of sqrt_approx
    max_denominator_bits: int = 512  # engine snaps destinations beyond this

    def __post_init__(self):
        if self.rel_eps <= 0:
            raise GeometryError("rel_eps must be positive")
        if self.sqrt_precision < 1:
            raise GeometryError("sqrt_precision must be a positive number of bits")
        if self.max_denominator_bits < 64:
            raise GeometryError("max_denominator_bits must be at least 64")

    def close(self, a: Scalar, b: Scalar, scale: Scalar) -> bool:
        """True when a and b agree up to rel_eps times scale."""
        return abs(a - b) <= self.rel_eps * scale


DEFAULT_TOLERANCE = ToleranceConfig()


@dataclass(frozen=True)
class Circle:
    center: Point
    sq_radius: Scalar

    def contains(self, p: Point) -> bool:
        return sq_dist(p, self.center) <= self.sq_radius


@dataclass(frozen=True)
class Configuration:
    """
    A multiset of points. ``points`` is kept sorted so that equal multisets
    compare and hash equal.
    """
    points: Tuple[Point, ...]

    @classmethod
    def of(cls, points: Iterable[Point]) -> "Configuration":
        return cls(tuple(sorted(points)))

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence[ScalarLike]]) -> "Configuration":
        return cls.of(point(x, y) for x, y in pairs)

    @cached_property
    def mult(self) -> Dict[Point, int]:
        return dict(Counter(self.points))

    @cached_property
    def support(self) -> Tuple[Point, ...]:
        return tuple(sorted(self.mult))

    @property
    def m(self) -> int:
        return len(self.mult)

    @property
    def is_set(self) -> bool:
        return len(self.mult) == len(self.points)

    def multiplicity(self, q: Point) -> int:
        return self.mult.get(q, 0)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[Point]:
        return iter(self.points)

    def __contains__(self, q: object) -> bool:
        return q in self.mult

    def map(self, fn) -> "Configuration":
        return Configuration.of(fn(p) for p in self.points)

    def translated(self, offset: Point) -> "Configuration":
        return self.map(lambda p: p + offset)

    def negated(self) -> "Configuration":
        return self.map(lambda p: -p)

    def without(self, q: Point) -> "Configuration":
        """Remove one occurrence of q."""
        points = list(self.points)
        try:
            points.remove(q)
        except ValueError:
            raise GeometryError(f"{q} is not in the configuration") from None
        return Configuration(tuple(points))

    def with_point(self, q: Point) -> "Configuration":
        return Configuration.of(self.points + (q,))

    def without_all(self, q: Point) -> "Configuration":
        return Configuration(tuple(p for p in self.points if p != q))

    @cached_property
    def sec(self) -> Circle:
        if not self.points:
            raise GeometryError("the smallest enclosing circle of an empty configuration is undefined")
        return _make_circle(self.support)

    @cached_property
    def extent(self) -> Scalar:
        """Larger side of the bounding box; within a factor sqrt(2) of the diameter."""
        if not self.points:
            return Fraction(0)
        xs = [p.x for p in self.support]
        ys = [p.y for p in self.support]
        return max(max(xs) - min(xs), max(ys) - min(ys))

    def __str__(self) -> str:
        return "{" + ", ".join(str(p) for p in self.points) + "}"


def sq_dist(p: Point, q: Point) -> Scalar:
    dx = p.x - q.x
    dy = p.y - q.y
    return dx * dx + dy * dy


# ───── smallest enclosing circle (move-to-front over the <-sorted support)

def _cross3(p: Point, q: Point, r: Point) -> Scalar:
    """Twice the signed area of triangle pqr."""
    return (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)


def _diameter_circle(a: Point, b: Point) -> Circle:
    center = Point((a.x + b.x) / 2, (a.y + b.y) / 2)
    return Circle(center, sq_dist(center, a))


def circumcircle(a: Point, b: Point, c: Point) -> Optional[Circle]:
    """Circle through three points, or None when they are collinear."""
    d = 2 * _cross3(a, b, c)
    if d == 0:
        return None
    bx, by = b.x - a.x, b.y - a.y
    cx, cy = c.x - a.x, c.y - a.y
    b2 = bx * bx + by * by
    c2 = cx * cx + cy * cy
    ux = (cy * b2 - by * c2) / d
    uy = (bx * c2 - cx * b2) / d
    center = Point(a.x + ux, a.y + uy)
    return Circle(center, ux * ux + uy * uy)


def _make_circle(points: Sequence[Point]) -> Circle:
    circle = None
    for i, p in enumerate(points):
        if circle is None or not circle.contains(p):
            circle = _circle_with_one(points[:i + 1], p)
    return circle


def _circle_with_one(points: Sequence[Point], p: Point) -> Circle:
    circle = Circle(p, Fraction(0))
    for i, q in enumerate(points):
        if not circle.contains(q):
            if circle.sq_radius == 0:
                circle = _diameter_circle(p, q)
            else:
                circle = _circle_with_two(points[:i + 1], p, q)
    return circle


def _circle_with_two(points: Sequence[Point], p: Point, q: Point) -> Circle:
    base = _diameter_circle(p, q)
    left = None
    right = None
    for r in points:
        if base.contains(r):
            continue
        cross = _cross3(p, q, r)
        circle = circumcircle(p, q, r)
        if circle is None:
            continue
        if cross > 0 and (left is None or _cross3(p, q, circle.center) > _cross3(p, q, left.center)):
            left = circle
        elif cross < 0 and (right is None or _cross3(p, q, circle.center) < _cross3(p, q, right.center)):
            right = circle
    if left is None and right is None:
        return base
    if left is None:
        return right
    if right is None:
        return left
    return left if left.sq_radius <= right.sq_radius else right


def smallest_enclosing_circle(config: Configuration) -> Circle:
    return config.sec


def is_linear(config: Configuration) -> bool:
    support = config.support
    if len(support) <= 2:
        return True
    a, b = support[0], support[1]
    return all(_cross3(a, b, c) == 0 for c in support[2:])


def min_pairwise_sq_distance(config: Configuration) -> Scalar:
    support = config.support
    if len(support) < 2:
        raise GeometryError("the minimum pairwise distance needs two distinct points")
    return min(sq_dist(p, q) for p, q in combinations(support, 2))


def max_pairwise_sq_distance(config: Configuration) -> Scalar:
    support = config.support
    if len(support) < 2:
        return Fraction(0)
    return max(sq_dist(p, q) for p, q in combinations(support, 2))


# ───── square roots

def _floor_log2(value: Fraction) -> int:
    a, b = value.numerator, value.denominator
    e = a.bit_length() - b.bit_length()
    if e >= 0:
        if a < (b << e):
            e -= 1
    elif (a << -e) < b:
        e -= 1
    return e


def sqrt_approx(s: ScalarLike, cfg: ToleranceConfig = DEFAULT_TOLERANCE, upper: bool = False) -> Scalar:
    """
    Deterministic rational square root with |r^2 - s| <= s * 2^-sqrt_precision.

    The result is sqrt(s) truncated to a number of binary digits that depends
    only on the binary order of magnitude of s; the cut points are exact
    powers of four, which keeps the function monotone. With ``upper`` the
    result is rounded up instead, so that r^2 >= s.

    Args:
        s: Nonnegative rational
        cfg: Tolerance configuration providing sqrt_precision
        upper: Round toward +infinity instead of toward zero

    Returns:
        Scalar: The approximation
    """
    s = to_scalar(s)
    if s < 0:
        raise GeometryError(f"square root of negative value {s}")
    if s == 0:
        return Fraction(0)
    j = _floor_log2(s) // 2
    k = cfg.sqrt_precision + 2 - j
    scaled = s * Fraction(4) ** k
    n = scaled.numerator // scaled.denominator
    root = math.isqrt(n)
    if upper and (root * root != n or n != scaled):
        root += 1
    return Fraction(root) / Fraction(2) ** k


# ───── angular order

def _half(d: Point) -> int:
    return 0 if d.y > 0 or (d.y == 0 and d.x > 0) else 1


def angle_cmp(center: Point, u: Point, v: Point) -> int:
    """
    Compare the counterclockwise angles of u and v around center.

    Returns:
        int: -1 if u comes first, 0 on the same ray, 1 if v comes first
    """
    du = u - center
    dv = v - center
    if du == ORIGIN or dv == ORIGIN:
        raise GeometryError("angle_cmp needs points distinct from the center")
    hu, hv = _half(du), _half(dv)
    if hu != hv:
        return -1 if hu < hv else 1
    cross = du.cross(dv)
    if cross > 0:
        return -1
    if cross < 0:
        return 1
    return 0


# ───── similarities

@dataclass(frozen=True)
class SimilarityTransform:
    """z -> scale * R(theta) z + translation, with (cos, sin) = (cos theta, sin theta)."""
    cos: Scalar
    sin: Scalar
    scale: Scalar
    translation: Point

    @classmethod
    def identity(cls) -> "SimilarityTransform":
        return cls(Fraction(1), Fraction(0), Fraction(1), ORIGIN)

    @classmethod
    def from_multiplier(cls, multiplier: Point, translation: Point,
                        cfg: ToleranceConfig = DEFAULT_TOLERANCE) -> "SimilarityTransform":
        """Build z -> multiplier * z + translation, multiplier read as a complex number."""
        scale = sqrt_approx(multiplier.norm2(), cfg)
        if scale == 0:
            raise GeometryError("a similarity needs a nonzero scale")
        return cls(multiplier.x / scale, multiplier.y / scale, scale, translation)

    @property
    def rotation(self) -> Tuple[Scalar, Scalar]:
        return self.cos, self.sin

    @property
    def multiplier(self) -> Point:
        return Point(self.scale * self.cos, self.scale * self.sin)

    def apply(self, p: Point) -> Point:
        return self.multiplier.times(p) + self.translation

    def apply_all(self, config: Configuration) -> Configuration:
        return config.map(self.apply)

    def inverse(self) -> "SimilarityTransform":
        cos, sin = self.cos, -self.sin
        inv_scale = 1 / self.scale
        back = Point(cos, sin).times(-self.translation).scaled(inv_scale)
        return SimilarityTransform(cos, sin, inv_scale, back)


def same_multiset(a: Sequence[Point], b: Sequence[Point], sq_tol: Scalar) -> bool:
    """Multiset equality with matching radius sqrt(sq_tol)."""
    if len(a) != len(b):
        return False
    if Counter(a) == Counter(b):
        return True
    if sq_tol <= 0:
        return False
    unused = sorted(b)
    for p in sorted(a):
        for index, q in enumerate(unused):
            if sq_dist(p, q) <= sq_tol:
                del unused[index]
                break
        else:
            return False
    return True


def match_sq_tolerance(config: Configuration, cfg: ToleranceConfig) -> Scalar:
    """Squared matching radius for points of config."""
    return (cfg.rel_eps * config.extent) ** 2


def _farthest_pair(config: Configuration) -> Tuple[Point, Point]:
    best = None
    best_d = Fraction(-1)
    for p, q in combinations(config.support, 2):
        d = sq_dist(p, q)
        if d > best_d:
            best, best_d = (p, q), d
    return best


def similarity_maps(G: Configuration, P: Configuration,
                    cfg: ToleranceConfig = DEFAULT_TOLERANCE) -> Iterator[Tuple[Point, Point, Point]]:
    """
    Enumerate proper similarities mapping G onto P as multisets.

    Each result is (multiplier, a, p): the map z -> p + multiplier * (z - a),
    with multiplier an exact complex ratio. A farthest pair (a, b) of G is
    anchored on every ordered pair of P at P's diameter.
    """
    if len(G) != len(P):
        raise GeometryError(f"size mismatch: {len(G)} vs {len(P)}")
    if not P.points:
        return
    if G.m == 1 or P.m == 1:
        if G.m == P.m:
            yield Point(Fraction(1), Fraction(0)), G.support[0], P.support[0]
        return
    a, b = _farthest_pair(G)
    ab = b - a
    ab2 = ab.norm2()
    sq_tol = match_sq_tolerance(P, cfg)
    diam = max_pairwise_sq_distance(P)
    target = list(P.points)
    for p in P.support:
        for q in P.support:
            if p == q or not cfg.close(sq_dist(p, q), diam, diam):
                continue
            multiplier = (q - p).times(ab.conjugate()).scaled(1 / ab2)
            image = [p + multiplier.times(z - a) for z in G.points]
            if same_multiset(image, target, sq_tol):
                yield multiplier, a, p


def is_similar(P: Configuration, G: Configuration,
               cfg: ToleranceConfig = DEFAULT_TOLERANCE) -> Optional[SimilarityTransform]:
    """
    Return a proper similarity T with T(G) = P, or None.
    """
    for multiplier, a, p in similarity_maps(G, P, cfg):
        return SimilarityTransform.from_multiplier(multiplier, p - multiplier.times(a), cfg)
    return None


# ───── generators

def _dyadic(value: Scalar, bits: int) -> Scalar:
    return Fraction(round(value * 2 ** bits), 2 ** bits)


def _unit_power(t: Scalar, n: int) -> Point:
    """(1 + i t)^n as a Point."""
    result = Point(Fraction(1), Fraction(0))
    step = Point(Fraction(1), t)
    for _ in range(n):
        result = result.times(step)
    return result


def polygon_half_angle(n: int, cfg: ToleranceConfig = DEFAULT_TOLERANCE) -> Scalar:
    """
    tan(pi/n) to sqrt_precision + 16 binary digits.

    Newton iteration on Im((1 + i t)^n), whose smallest positive root is
    tan(pi/n), started from the float value.
    """
    if n < 3:
        raise GeometryError("tan(pi/n) needs n >= 3")
    bits = cfg.sqrt_precision + 16
    t = _dyadic(Fraction(math.tan(math.pi / n)), bits)
    for _ in range(64):
        slope = n * _unit_power(t, n - 1).x
        nxt = _dyadic(t - _unit_power(t, n).y / slope, bits)
        if nxt == t:
            break
        t = nxt
    return t


def regular_polygon(n: int, radius: ScalarLike = 1, cfg: ToleranceConfig = DEFAULT_TOLERANCE) -> Configuration:
    """
    Vertices of a regular n-gon on a circle about the origin.

    Every vertex is a rational point exactly on the circle, built from the
    half-angle tangent tan(i*pi/n). The tangents are rounded to
    sqrt_precision + 16 binary digits, far inside rel_eps, so the symmetry
    predicates see an n-fold rotation.
    """
    if n < 2:
        raise GeometryError("a polygon needs at least two vertices")
    radius = to_scalar(radius)
    if n == 2:
        return Configuration.of([Point(radius, Fraction(0)), Point(-radius, Fraction(0))])
    bits = cfg.sqrt_precision + 16
    t = polygon_half_angle(n, cfg)
    vertices: List[Point] = []
    for i in range(n):
        if 2 * i == n:
            vertices.append(Point(-radius, Fraction(0)))
            continue
        w = _unit_power(t, i)
        u = _dyadic(w.y / w.x, bits)
        den = 1 + u * u
        vertices.append(Point(radius * (1 - u * u) / den, radius * 2 * u / den))
    return Configuration.of(vertices)


def random_configuration(rng, n: int, box: int = 10, distinct: bool = False) -> Configuration:
    """Integer points drawn uniformly from [-box, box]^2."""
    if distinct and n > (2 * box + 1) ** 2:
        raise GeometryError("box too small for the requested number of distinct points")
    chosen: List[Point] = []
    while len(chosen) < n:
        p = Point(Fraction(rng.randint(-box, box)), Fraction(rng.randint(-box, box)))
        if distinct and p in chosen:
            continue
        chosen.append(p)
    return Configuration.of(chosen)
