"""
Target functions: pure maps from a self-centred observation to a destination.

Every function returns None (the error symbol) when the origin is missing
from the observation.
"""

import logging
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional

from .errors import TargetFunctionError
from .geom import (DEFAULT_TOLERANCE, ORIGIN, Configuration, Point, ToleranceConfig,
                   min_pairwise_sq_distance, sqrt_approx, to_scalar, pretty_scalar)
from .symmetry import largest_point, rotation_order

logger = logging.getLogger(__name__)


class Family(str, Enum):
    SCT = "sct"
    SCT_STAR = "sctstar"
    TWO_GAT = "2gat"
    GAT = "gat"
    SGAT = "sgat"
    SYM = "sym"
    PF = "pf"


# Tags: "sct:2/4", "sctstar:1/5", "2gat", "gat:1", "sgat:3", "sym:-1/2", "pf:5"
TAG_PATTERN = re.compile(r'^(?P<family>[a-z0-9]+)(?::(?P<index>-?\d+(?:/\d+)?)(?:/(?P<arity>\d+))?)?$')


@dataclass(frozen=True)
class TargetFunctionId:
    """Identifies one target function of an algorithm."""
    family: Family
    index: int = 1
    arity: int = 0  # c for sct, n for sctstar
    coefficient: Fraction = Fraction(0)  # unfavorable-case multiplier for sym
    pattern: Optional[Configuration] = None  # goal pattern for pf and sctstar

    def __post_init__(self):
        family = self.family
        if family is Family.SCT:
            if not 1 <= self.index <= self.arity:
                raise TargetFunctionError(f"sct index {self.index} outside 1..{self.arity}")
        elif family is Family.GAT:
            if self.index not in (1, 2):
                raise TargetFunctionError(f"gat index must be 1 or 2, got {self.index}")
        elif family is Family.SGAT:
            if self.index not in (1, 2, 3):
                raise TargetFunctionError(f"sgat index must be 1, 2 or 3, got {self.index}")
        elif family in (Family.PF, Family.SCT_STAR):
            if self.pattern is None:
                raise TargetFunctionError(f"{family.value} needs a goal pattern")
            n = len(self.pattern)
            if n < 4:
                raise TargetFunctionError("pattern formation needs at least four robots")
            if self.pattern.m < 2:
                raise TargetFunctionError("the goal pattern needs at least two distinct points")
            if not 1 <= self.index <= n:
                raise TargetFunctionError(f"{family.value} index {self.index} outside 1..{n}")

    @property
    def tag(self) -> str:
        family = self.family
        if family is Family.SCT:
            return f"sct:{self.index}/{self.arity}"
        if family is Family.SCT_STAR:
            return f"sctstar:{self.index}/{len(self.pattern)}"
        if family is Family.TWO_GAT:
            return "2gat"
        if family is Family.SYM:
            return f"sym:{pretty_scalar(self.coefficient)}"
        return f"{family.value}:{self.index}"

    def __str__(self) -> str:
        return self.tag

    @classmethod
    def parse(cls, tag: str, pattern: Optional[Configuration] = None) -> "TargetFunctionId":
        match = TAG_PATTERN.match(tag.strip())
        if not match:
            raise TargetFunctionError(f"malformed target function tag: {tag!r}")
        try:
            family = Family(match.group("family"))
        except ValueError:
            raise TargetFunctionError(f"unknown target function family in {tag!r}") from None
        index_text = match.group("index")
        arity_text = match.group("arity")
        if family is Family.TWO_GAT:
            if index_text:
                raise TargetFunctionError(f"2gat takes no index: {tag!r}")
            return cls(family)
        if index_text is None:
            raise TargetFunctionError(f"{family.value} needs an index: {tag!r}")
        if family is Family.SYM:
            text = index_text + (f"/{arity_text}" if arity_text else "")
            return cls(family, coefficient=to_scalar(text))
        if "/" in index_text:
            index_text, arity_text = index_text.split("/")
        index = int(index_text)
        if family is Family.SCT:
            if arity_text is None:
                raise TargetFunctionError(f"sct needs a parameter c: {tag!r}")
            return cls(family, index, arity=int(arity_text))
        if family in (Family.PF, Family.SCT_STAR):
            tf = cls(family, index, pattern=pattern)
            if arity_text is not None and int(arity_text) != len(pattern):
                raise TargetFunctionError(f"{tag!r} does not match a pattern of {len(pattern)} points")
            return tf
        return cls(family, index)


def sct_id(i: int, c: int) -> TargetFunctionId:
    return TargetFunctionId(Family.SCT, i, arity=c)


def gat_id(i: int) -> TargetFunctionId:
    return TargetFunctionId(Family.GAT, i)


def sgat_id(i: int) -> TargetFunctionId:
    return TargetFunctionId(Family.SGAT, i)


def sym_id(coefficient) -> TargetFunctionId:
    return TargetFunctionId(Family.SYM, coefficient=to_scalar(coefficient))


TWO_GAT = TargetFunctionId(Family.TWO_GAT)


def pf_id(i: int, pattern: Configuration) -> TargetFunctionId:
    return TargetFunctionId(Family.PF, i, pattern=pattern)


def sct_star_id(i: int, pattern: Configuration) -> TargetFunctionId:
    return TargetFunctionId(Family.SCT_STAR, i, pattern=pattern)


# ───── scattering

def sct(i: int, c: int, obs: Configuration, cfg: ToleranceConfig = DEFAULT_TOLERANCE) -> Optional[Point]:
    if not 1 <= i <= c:
        raise TargetFunctionError(f"sct index {i} outside 1..{c}")
    if ORIGIN not in obs:
        return None
    m = obs.m
    if m >= c:
        return ORIGIN
    if m == 1:
        return ORIGIN if i == 1 else Point(Fraction(1), Fraction(0))
    delta = sqrt_approx(min_pairwise_sq_distance(obs), cfg)
    return Point(delta / (2 * (i + 1)), Fraction(0))


# ───── gathering

def is_unfavorable(obs: Configuration, cfg: ToleranceConfig = DEFAULT_TOLERANCE) -> bool:
    """Two distinct points with equal multiplicities (m_P = k_P = 2)."""
    return obs.m == 2 and rotation_order(obs, cfg) == 2


def _other_point(obs: Configuration) -> Point:
    return next(q for q in obs.support if q != ORIGIN)


def two_gat(obs: Configuration, cfg: ToleranceConfig = DEFAULT_TOLERANCE) -> Optional[Point]:
    if ORIGIN not in obs:
        return None
    if obs.m == 1:
        return ORIGIN
    k = rotation_order(obs, cfg)
    if k == 1:
        return largest_point(obs, cfg)
    if obs.m == 2:
        return ORIGIN
    return obs.sec.center


def gat(i: int, obs: Configuration, cfg: ToleranceConfig = DEFAULT_TOLERANCE) -> Optional[Point]:
    if i not in (1, 2):
        raise TargetFunctionError(f"gat index must be 1 or 2, got {i}")
    if ORIGIN not in obs:
        return None
    if i == 1 or not is_unfavorable(obs, cfg):
        return two_gat(obs, cfg)
    q = _other_point(obs)
    return q if q > ORIGIN else q.scaled(2)


def sym(coefficient: Fraction, obs: Configuration, cfg: ToleranceConfig = DEFAULT_TOLERANCE) -> Optional[Point]:
    """2gat, except that an unfavorable observation sends the robot to coefficient * q."""
    if ORIGIN not in obs:
        return None
    if not is_unfavorable(obs, cfg):
        return two_gat(obs, cfg)
    return _other_point(obs).scaled(coefficient)


def sgat(i: int, obs: Configuration, cfg: ToleranceConfig = DEFAULT_TOLERANCE) -> Optional[Point]:
    if i not in (1, 2, 3):
        raise TargetFunctionError(f"sgat index must be 1, 2 or 3, got {i}")
    return sym(Fraction(-i), obs, cfg)


# ───── dispatch

@lru_cache(maxsize=1 << 16)
def evaluate(tf: TargetFunctionId, obs: Configuration, cfg: ToleranceConfig = DEFAULT_TOLERANCE) -> Optional[Point]:
    """Apply the target function tf to an observation."""
    from . import formation

    family = tf.family
    if family is Family.SCT:
        return sct(tf.index, tf.arity, obs, cfg)
    if family is Family.TWO_GAT:
        return two_gat(obs, cfg)
    if family is Family.GAT:
        return gat(tf.index, obs, cfg)
    if family is Family.SGAT:
        return sgat(tf.index, obs, cfg)
    if family is Family.SYM:
        return sym(tf.coefficient, obs, cfg)
    if family is Family.SCT_STAR:
        return formation.sct_star(tf.index, len(tf.pattern), obs, tf.pattern, cfg)
    return formation.pf(tf.index, tf.pattern, obs, cfg)


def is_symmetric_tf(tf: TargetFunctionId, samples: Iterable[Configuration],
                    cfg: ToleranceConfig = DEFAULT_TOLERANCE) -> bool:
    """Check phi(P) = -phi(-P) on every sample."""
    for sample in samples:
        here = evaluate(tf, sample, cfg)
        mirrored = evaluate(tf, sample.negated(), cfg)
        if here is None or mirrored is None or here != -mirrored:
            logger.debug("%s is not symmetric on %s", tf, sample)
            return False
    return True
