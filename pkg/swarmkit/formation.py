"""
Pattern formation: good configurations, the staged scattering sct*, the
completion chooser and the target functions pf_i.

A good configuration is either
  * a set with one far point p1 at distance >= 10 delta2 from the SEC center
    o2 of the rest (radius delta2), or
  * a layout that, in the frame sending p1 to (0,0) and p3 to (31,0), keeps p1
    alone in the unit circle at (0,0), a set in the unit circle at (10,0) and
    a partial copy of the pattern in the unit circle at (30,0).
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .errors import TargetFunctionError
from .geom import (DEFAULT_TOLERANCE, ORIGIN, Configuration, Point, SimilarityTransform,
                   ToleranceConfig, is_similar, similarity_maps, sq_dist, sqrt_approx)
from .symmetry import order_points
from .targets import sct

logger = logging.getLogger(__name__)

COND1 = "cond1"
COND2 = "cond2"

# Decomposition frame: p1 -> (0,0), p3 -> (31,0); unit circles C1, C2, C3.
FAR_POINT = Fraction(31)
C1_CENTER = Point(Fraction(0), Fraction(0))
C2_CENTER = Point(Fraction(10), Fraction(0))
C3_CENTER = Point(Fraction(30), Fraction(0))
P3_ANCHOR = Point(FAR_POINT, Fraction(0))
# Transformation (I) puts p3 beyond o2 at this multiple of dist(p1, o2).
P3_STRETCH = Fraction(21, 10)


@dataclass(frozen=True)
class GoodDecomposition:
    variant: str
    p1: Point
    P1: Configuration
    P2: Configuration
    P3: Configuration = Configuration(())
    o2: Optional[Point] = None  # cond1
    sq_delta2: Optional[Fraction] = None  # cond1
    p3: Optional[Point] = None  # cond2
    embedding: Tuple[Point, ...] = field(default=(), repr=False)  # cond2: canonical P* in the decomposition frame

    @property
    def is_cond1(self) -> bool:
        return self.variant == COND1

    @property
    def P12(self) -> Configuration:
        return Configuration.of(self.P1.points + self.P2.points)

    def to_frame(self, p: Point) -> Point:
        return _to_frame(self.p1, self.p3, p)

    def from_frame(self, z: Point) -> Point:
        return self.p1 + z.times(self.p3 - self.p1).scaled(1 / FAR_POINT)

    def frame(self, cfg: ToleranceConfig = DEFAULT_TOLERANCE) -> SimilarityTransform:
        """The similarity sending p1 to (0,0) and p3 to (31,0)."""
        if self.p3 is None:
            raise TargetFunctionError("a far-point decomposition has no decomposition frame")
        multiplier = _frame_multiplier(self.p1, self.p3)
        return SimilarityTransform.from_multiplier(multiplier, -multiplier.times(self.p1), cfg)


def _frame_multiplier(p1: Point, p3: Point) -> Point:
    d = p3 - p1
    return d.conjugate().scaled(FAR_POINT / d.norm2())


def _to_frame(p1: Point, p3: Point, p: Point) -> Point:
    return (p - p1).times(_frame_multiplier(p1, p3))


# ───── canonical embeddings of the pattern into C3

def canonical_embeddings(G: Configuration) -> List[Tuple[Point, ...]]:
    """
    Images of G scaled to unit SEC radius, centred at (30,0) and rotated so
    that one of its SEC boundary points lands on (31,0). One entry per
    boundary point, each a sorted tuple; the list is sorted by <.
    """
    sec = G.sec
    images = set()
    for b in G.support:
        if sq_dist(b, sec.center) != sec.sq_radius:
            continue
        turn = (b - sec.center).conjugate().scaled(1 / sec.sq_radius)
        images.add(tuple(sorted(C3_CENTER + (z - sec.center).times(turn) for z in G.points)))
    return sorted(images)


def _match_into(small: Sequence[Point], big: Sequence[Point], sq_tol: Fraction) -> Optional[List[Point]]:
    """Match small into big as multisets; return the unmatched rest of big."""
    rest = list(big)
    for p in small:
        if p in rest:
            rest.remove(p)
            continue
        for index, q in enumerate(rest):
            if sq_dist(p, q) <= sq_tol:
                del rest[index]
                break
        else:
            return None
    return rest


def _frame_tolerance(cfg: ToleranceConfig) -> Fraction:
    return (cfg.rel_eps * FAR_POINT) ** 2


# ───── good configurations

def _far_point_decomposition(P: Configuration) -> Optional[GoodDecomposition]:
    if not P.is_set:
        return None
    for p1 in P.support:
        rest = P.without(p1)
        sec = rest.sec
        if sec.sq_radius > 0 and sq_dist(p1, sec.center) >= 100 * sec.sq_radius:
            return GoodDecomposition(COND1, p1, Configuration((p1,)), rest,
                                     o2=sec.center, sq_delta2=sec.sq_radius)
    return None


def _staged_decomposition(P: Configuration, G: Configuration,
                          cfg: ToleranceConfig) -> Optional[GoodDecomposition]:
    sec = P.sec
    boundary = [q for q in P.support if sq_dist(q, sec.center) == sec.sq_radius]
    if len(boundary) != 2:
        return None
    a, b = boundary
    if Point((a.x + b.x) / 2, (a.y + b.y) / 2) != sec.center:
        return None
    slack = cfg.rel_eps * FAR_POINT * FAR_POINT
    sq_tol = _frame_tolerance(cfg)
    embeddings = canonical_embeddings(G)
    for p1, p3 in ((a, b), (b, a)):
        parts = ([], [], [])
        for p in P.points:
            z = _to_frame(p1, p3, p)
            for index, center in enumerate((C1_CENTER, C2_CENTER, C3_CENTER)):
                if sq_dist(z, center) <= 1 + slack:
                    parts[index].append(p)
                    break
            else:
                break
        else:
            P1, P2, P3 = (Configuration.of(part) for part in parts)
            if P1.points != (p1,) or not P2.is_set or p3 not in P3:
                continue
            built = [_to_frame(p1, p3, p) for p in P3.points]
            for image in embeddings:
                if _match_into(built, image, sq_tol) is not None:
                    return GoodDecomposition(COND2, p1, P1, P2, P3, p3=p3, embedding=image)
    return None


def is_good(P: Configuration, G: Configuration,
            cfg: ToleranceConfig = DEFAULT_TOLERANCE) -> Optional[GoodDecomposition]:
    """
    Decompose P as a good configuration for pattern G, or return None.

    The far-point form is tried first; it can only coincide with the staged
    form once the staged working set is empty.
    """
    if len(P) != len(G):
        raise TargetFunctionError(f"configuration has {len(P)} points, pattern has {len(G)}")
    if len(P) < 4:
        raise TargetFunctionError("good configurations are defined for at least four robots")
    return _far_point_decomposition(P) or _staged_decomposition(P, G, cfg)


# ───── scattering towards a good configuration

def _sct_star_not_good(i: int, n: int, obs: Configuration, cfg: ToleranceConfig) -> Point:
    if not obs.is_set:
        return sct(i, n, obs, cfg)
    if i >= 2:
        return ORIGIN
    sec = obs.without(ORIGIN).sec
    if sq_dist(ORIGIN, sec.center) >= 100 * sec.sq_radius:
        return ORIGIN
    # rounded up so that the far-point test holds exactly after the move
    if sec.center == ORIGIN:
        return Point(10 * sqrt_approx(sec.sq_radius, cfg, upper=True), Fraction(0))
    t = sqrt_approx(100 * sec.sq_radius / sec.center.norm2(), cfg, upper=True)
    return sec.center - sec.center.scaled(t)


def sct_star(i: int, n: int, obs: Configuration, G: Configuration,
             cfg: ToleranceConfig = DEFAULT_TOLERANCE) -> Optional[Point]:
    if not 1 <= i <= n:
        raise TargetFunctionError(f"sct* index {i} outside 1..{n}")
    if ORIGIN not in obs:
        return None
    if is_good(obs, G, cfg):
        return ORIGIN
    return _sct_star_not_good(i, n, obs, cfg)


# ───── completion

def far_point_completions(P2: Configuration, G: Configuration,
                          cfg: ToleranceConfig = DEFAULT_TOLERANCE) -> List[Point]:
    """All q such that P2 plus q is similar to G."""
    found = set()
    for g in G.support:
        H = G.without(g)
        for multiplier, a, p in similarity_maps(H, P2, cfg):
            found.add(p + multiplier.times(g - a))
    return sorted(found)


def _p3_target(decomp: GoodDecomposition) -> Point:
    return decomp.o2 + (decomp.o2 - decomp.p1).scaled(P3_STRETCH)


def choose_completion(G: Configuration, decomp: GoodDecomposition,
                      cfg: ToleranceConfig = DEFAULT_TOLERANCE) -> Point:
    """
    The destination of the single robot that moves in a good configuration,
    in the coordinates the decomposition was computed in.
    """
    if decomp.is_cond1:
        completions = far_point_completions(decomp.P2, G, cfg)
        return completions[0] if completions else _p3_target(decomp)
    built = [decomp.to_frame(p) for p in decomp.P3.points]
    missing = _match_into(built, decomp.embedding, _frame_tolerance(cfg))
    if not missing:
        raise TargetFunctionError("the staged pattern has no missing point")
    return decomp.from_frame(min(missing))


def _is_largest_in_p2(decomp: GoodDecomposition, cfg: ToleranceConfig) -> bool:
    candidates = decomp.P2.support
    if ORIGIN not in candidates:
        return False
    if len(candidates) == 1:
        return True
    return order_points(decomp.P12, candidates, cfg)[0] == ORIGIN


def pf(i: int, G: Configuration, obs: Configuration,
       cfg: ToleranceConfig = DEFAULT_TOLERANCE) -> Optional[Point]:
    n = len(G)
    if not 1 <= i <= n:
        raise TargetFunctionError(f"pf index {i} outside 1..{n}")
    if ORIGIN not in obs:
        return None
    if is_similar(obs, G, cfg) is not None:
        return ORIGIN
    decomp = is_good(obs, G, cfg)
    if decomp is None:
        return _sct_star_not_good(i, n, obs, cfg)
    if decomp.is_cond1:
        completions = far_point_completions(decomp.P2, G, cfg)
        if completions:
            return completions[0] if decomp.p1 == ORIGIN else ORIGIN
        return _p3_target(decomp) if _is_largest_in_p2(decomp, cfg) else ORIGIN
    if not decomp.P2.points:
        # every other robot is in place; the far point fills the last slot
        return choose_completion(G, decomp, cfg) if decomp.p1 == ORIGIN else ORIGIN
    return choose_completion(G, decomp, cfg) if _is_largest_in_p2(decomp, cfg) else ORIGIN
