"""
Rotational symmetry of configurations: rotation order, symmetricity, orbits,
intrinsic views and the total order used to elect a unique point.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from typing import Dict, FrozenSet, List, Sequence, Tuple

from .errors import SymmetryError
from .geom import (DEFAULT_TOLERANCE, Configuration, Point, Scalar, ToleranceConfig,
                   angle_cmp, sq_dist, sqrt_approx)


@dataclass(frozen=True)
class OrbitPartition:
    orbits: Tuple[FrozenSet[Point], ...]
    k: int

    def orbit_of(self, q: Point) -> FrozenSet[Point]:
        for orbit in self.orbits:
            if q in orbit:
                return orbit
        raise SymmetryError(f"{q} is not in the configuration")


@dataclass(frozen=True)
class View:
    origin: Point
    coords: Tuple[Point, ...]  # sorted by <


@dataclass(frozen=True)
class PointOrderKey:
    mult: int
    sq_center_dist: Scalar
    view_key: Tuple[Point, ...]  # empty for the center point


@dataclass(frozen=True)
class _Element:
    point: Point
    sq_dist: Scalar
    mult: int
    gap: Point  # v_next * conj(v), only its direction matters


def _circular_sequence(config: Configuration) -> List[_Element]:
    """Non-center support points sorted by angle about o_P, then by distance."""
    center = config.sec.center
    others = [q for q in config.support if q != center]

    def by_angle(u: Point, v: Point) -> int:
        order = angle_cmp(center, u, v)
        if order:
            return order
        du, dv = sq_dist(u, center), sq_dist(v, center)
        return (du > dv) - (du < dv)

    others.sort(key=cmp_to_key(by_angle))
    elements = []
    for i, q in enumerate(others):
        nxt = others[(i + 1) % len(others)]
        gap = (nxt - center).times((q - center).conjugate())
        elements.append(_Element(q, sq_dist(q, center), config.multiplicity(q), gap))
    return elements


def _same_direction(z1: Point, z2: Point, cfg: ToleranceConfig) -> bool:
    if z1.dot(z2) <= 0:
        return False
    cross = z1.cross(z2)
    return cross * cross <= cfg.rel_eps * cfg.rel_eps * z1.norm2() * z2.norm2()


def _same_element(a: _Element, b: _Element, scale: Scalar, cfg: ToleranceConfig) -> bool:
    return (a.mult == b.mult
            and cfg.close(a.sq_dist, b.sq_dist, scale)
            and _same_direction(a.gap, b.gap, cfg))


def _fixing_shifts(elements: Sequence[_Element], scale: Scalar, cfg: ToleranceConfig) -> List[int]:
    size = len(elements)
    return [shift for shift in range(size)
            if all(_same_element(elements[i], elements[(i + shift) % size], scale, cfg)
                   for i in range(size))]


def rotation_order(config: Configuration, cfg: ToleranceConfig = DEFAULT_TOLERANCE) -> int:
    """
    k_P: the number of rotations about the SEC center that map the support
    onto itself preserving multiplicities; 0 when the support is the center.
    """
    if config.m == 1:
        return 0
    elements = _circular_sequence(config)
    return len(_fixing_shifts(elements, config.sec.sq_radius, cfg))


def symmetricity(config: Configuration, cfg: ToleranceConfig = DEFAULT_TOLERANCE) -> int:
    k = rotation_order(config, cfg)
    return math.gcd(k, config.multiplicity(config.sec.center))


def orbits(config: Configuration, cfg: ToleranceConfig = DEFAULT_TOLERANCE) -> OrbitPartition:
    center = config.sec.center
    if config.m == 1:
        return OrbitPartition((frozenset(config.support),), 0)
    elements = _circular_sequence(config)
    k = len(_fixing_shifts(elements, config.sec.sq_radius, cfg))
    size = len(elements)
    step = size // k
    groups = []
    for i in range(step):
        groups.append(frozenset(elements[(i + j * step) % size].point for j in range(k)))
    if center in config:
        groups.append(frozenset([center]))
    groups.sort(key=min)
    return OrbitPartition(tuple(groups), k)


def view(config: Configuration, q: Point, cfg: ToleranceConfig = DEFAULT_TOLERANCE) -> View:
    """
    Express the configuration in the frame of q: origin q, x-axis towards the
    SEC center, unit length the SEC radius, right-handed.
    """
    if q not in config:
        raise SymmetryError(f"{q} is not in the configuration")
    sec = config.sec
    axis = sec.center - q
    if axis.norm2() == 0:
        raise SymmetryError("the view of the SEC center is undefined")
    unit = sqrt_approx(axis.norm2() * sec.sq_radius, cfg)
    coords = []
    for p in config.points:
        d = p - q
        coords.append(Point(d.dot(axis) / unit, axis.cross(d) / unit))
    return View(q, tuple(sorted(coords)))


def point_order_key(config: Configuration, q: Point, cfg: ToleranceConfig = DEFAULT_TOLERANCE) -> PointOrderKey:
    if q not in config:
        raise SymmetryError(f"{q} is not in the configuration")
    center = config.sec.center
    coords = () if q == center else view(config, q, cfg).coords
    return PointOrderKey(config.multiplicity(q), sq_dist(q, center), coords)


def _cmp_scalar(a: Scalar, b: Scalar, eps: Scalar) -> int:
    if abs(a - b) <= eps:
        return 0
    return 1 if a > b else -1


def _cmp_views(a: Sequence[Point], b: Sequence[Point], eps: Scalar) -> int:
    for pa, pb in zip(a, b):
        order = _cmp_scalar(pa.x, pb.x, eps) or _cmp_scalar(pa.y, pb.y, eps)
        if order:
            return order
    return (len(a) > len(b)) - (len(a) < len(b))


def compare_keys(a: PointOrderKey, b: PointOrderKey, sq_radius: Scalar,
                 cfg: ToleranceConfig = DEFAULT_TOLERANCE) -> int:
    """1 when a is larger under the point order, -1 when smaller, 0 when tied."""
    if a.mult != b.mult:
        return 1 if a.mult > b.mult else -1
    closer = _cmp_scalar(b.sq_center_dist, a.sq_center_dist, cfg.rel_eps * sq_radius)
    if closer:
        return closer
    if not a.view_key or not b.view_key:
        return 0
    return _cmp_views(a.view_key, b.view_key, cfg.rel_eps)


def compare_points(config: Configuration, q: Point, q2: Point,
                   cfg: ToleranceConfig = DEFAULT_TOLERANCE) -> int:
    """
    Compare two support points under the order of the configuration:
    higher multiplicity, then closer to the SEC center, then larger view.

    Returns:
        int: 1 if q is larger, -1 if q2 is larger, 0 if their keys tie
    """
    return compare_keys(point_order_key(config, q, cfg), point_order_key(config, q2, cfg),
                        config.sec.sq_radius, cfg)


def order_points(config: Configuration, candidates: Sequence[Point] = None,
                 cfg: ToleranceConfig = DEFAULT_TOLERANCE) -> List[Point]:
    """Candidates (default: the support) sorted from largest to smallest."""
    if candidates is None:
        candidates = config.support
    keys: Dict[Point, PointOrderKey] = {q: point_order_key(config, q, cfg) for q in candidates}
    sq_radius = config.sec.sq_radius

    def cmp(u: Point, v: Point) -> int:
        return compare_keys(keys[v], keys[u], sq_radius, cfg) or ((u > v) - (u < v))

    return sorted(candidates, key=cmp_to_key(cmp))


def largest_point(config: Configuration, cfg: ToleranceConfig = DEFAULT_TOLERANCE) -> Point:
    k = rotation_order(config, cfg)
    if k != 1:
        raise SymmetryError(f"the largest point is defined only when k_P = 1 (k_P = {k})")
    return order_points(config, cfg=cfg)[0]
