"""
Named algorithms (sets of target functions) and the table of minimum
algorithm sizes per problem.
"""

from typing import Optional, Tuple

from .errors import TargetFunctionError
from .geom import Configuration
from .targets import (TWO_GAT, TargetFunctionId, gat_id, pf_id, sct_id, sct_star_id,
                      sgat_id, sym_id)

Algorithm = Tuple[TargetFunctionId, ...]

PROBLEMS = ("sct", "gat", "pf", "ffg", "fsct", "fgp", "ffgp")


def scatter_algorithm(c: int) -> Algorithm:
    if c < 1:
        raise TargetFunctionError(f"scattering needs c >= 1, got {c}")
    return tuple(sct_id(i, c) for i in range(1, c + 1))


def two_gat_algorithm() -> Algorithm:
    return (TWO_GAT,)


def gathering_algorithm() -> Algorithm:
    return (gat_id(1), gat_id(2))


def symmetric_gathering_algorithm() -> Algorithm:
    return (sgat_id(1), sgat_id(2), sgat_id(3))


def clone_algorithm() -> Algorithm:
    """Two symmetric functions that cannot break a mirrored bivalent start."""
    return (sym_id(0), sym_id(1))


def pattern_formation_algorithm(pattern: Configuration) -> Algorithm:
    return tuple(pf_id(i, pattern) for i in range(1, len(pattern) + 1))


def staged_scatter_algorithm(pattern: Configuration) -> Algorithm:
    return tuple(sct_star_id(i, pattern) for i in range(1, len(pattern) + 1))


def fault_tolerant_scatter_size(c: int, f: int) -> int:
    return f + 2 if c == 2 else c + f - 1


def fault_tolerant_scatter_algorithm(c: int, f: int) -> Algorithm:
    """Scatter to c points despite f crashes."""
    if c < 2 or f < 0:
        raise TargetFunctionError(f"fault-tolerant scattering needs c >= 2 and f >= 0, got c={c}, f={f}")
    return scatter_algorithm(fault_tolerant_scatter_size(c, f))


def by_name(name: str, pattern: Optional[Configuration] = None) -> Algorithm:
    """
    Resolve an algorithm name: "2gata", "gata", "sgta", "clone", "pfa",
    "scta*", "<c>scta" and "ft-scta:<c>,<f>".
    """
    key = name.strip().lower()
    if key == "2gata":
        return two_gat_algorithm()
    if key == "gata":
        return gathering_algorithm()
    if key == "sgta":
        return symmetric_gathering_algorithm()
    if key == "clone":
        return clone_algorithm()
    if key in ("pfa", "scta*"):
        if pattern is None:
            raise TargetFunctionError(f"{name} needs a goal pattern")
        return pattern_formation_algorithm(pattern) if key == "pfa" else staged_scatter_algorithm(pattern)
    if key.startswith("ft-scta:"):
        try:
            c, f = (int(part) for part in key[len("ft-scta:"):].split(","))
        except ValueError:
            raise TargetFunctionError(f"malformed algorithm name: {name!r}") from None
        return fault_tolerant_scatter_algorithm(c, f)
    if key.endswith("scta") and key[:-4].isdigit():
        return scatter_algorithm(int(key[:-4]))
    raise TargetFunctionError(f"unknown algorithm: {name!r}")


def minimum_algorithm_size(problem: str, n: int, c: int = 1, f: int = 0) -> Optional[int]:
    """
    Least number of target functions solving a problem for n robots under
    every assignment; None when no algorithm exists.

    For fault-tolerant scattering the value is the size of the algorithm
    that realises it, which is tight for c = 2.
    """
    problem = problem.lower()
    if problem not in PROBLEMS:
        raise TargetFunctionError(f"unknown problem: {problem!r}")
    if problem == "sct":
        return c
    if problem == "gat":
        return 2
    if problem == "pf":
        return n
    if problem == "ffg":
        if not 1 <= f <= n - 1:
            raise TargetFunctionError(f"fault bound must be in 1..{n - 1}")
        return 3
    if problem == "fsct":
        return fault_tolerant_scatter_size(c, f)
    return None if f >= 1 else 2
