"""Points, the dominance order, and sequential skyline computation.

Everything here is pure and immutable; these functions are the ground truth
that all distributed protocols in the package are checked against.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

__all__ = [
    "Point",
    "Skyline",
    "DuplicatePointError",
    "dominates",
    "covers",
    "skyline",
    "skyline_bruteforce",
]


class DuplicatePointError(ValueError):
    """An instance contained two points with identical (x, y) coordinates."""


@dataclass(frozen=True, slots=True)
class Point:
    """A 2-d point with a unique integer key; larger is better on both axes."""

    id: int
    x: float
    y: float


def dominates(u: Point, v: Point) -> bool:
    """True iff u >= v on both coordinates and the coordinate pairs differ."""
    return u.x >= v.x and u.y >= v.y and (u.x != v.x or u.y != v.y)


def covers(u: Point, v: Point) -> bool:
    """Dominates-or-coincides: u >= v on both coordinates.

    This is the pruning relation: a site may discard v once a confirmed
    skyline point u covers it (v is either dominated or is u itself).
    """
    return u.x >= v.x and u.y >= v.y


@dataclass(frozen=True)
class Skyline:
    """The maximal points of a set, sorted by strictly increasing x.

    Sorted increasing by x implies strictly decreasing y: no member
    dominates another.
    """

    points: tuple[Point, ...]

    def ids(self) -> frozenset[int]:
        return frozenset(p.id for p in self.points)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[Point]:
        return iter(self.points)

    def __bool__(self) -> bool:
        return bool(self.points)


def skyline(points: Iterable[Point]) -> Skyline:
    """Compute the skyline by sort-and-scan in O(n log n).

    Points are sorted by decreasing x (ties broken by decreasing y) and a
    running maximum over y keeps exactly the non-dominated points.

    Raises DuplicatePointError if two points share the same (x, y) pair.
    """
    pts = sorted(points, key=lambda p: (-p.x, -p.y))
    out: list[Point] = []
    best_y = float("-inf")
    prev: Point | None = None
    for p in pts:
        if prev is not None and p.x == prev.x and p.y == prev.y:
            raise DuplicatePointError(f"duplicate coordinates {(p.x, p.y)} (ids {prev.id}, {p.id})")
        prev = p
        if p.y > best_y:
            out.append(p)
            best_y = p.y
    out.reverse()
    return Skyline(tuple(out))


def skyline_bruteforce(points: Iterable[Point]) -> Skyline:
    """Quadratic-scan oracle, independent of skyline().

    Keeps p iff no other point dominates p, checking all pairs.  Vectorized
    with numpy so the randomized test suites stay fast, but still a plain
    O(n^2) pairwise scan with no sorting shortcuts.
    """
    pts = list(points)
    if not pts:
        return Skyline(())
    seen: set[tuple[float, float]] = set()
    for p in pts:
        key = (p.x, p.y)
        if key in seen:
            raise DuplicatePointError(f"duplicate coordinates {key}")
        seen.add(key)
    xs = np.array([p.x for p in pts])
    ys = np.array([p.y for p in pts])
    n = len(pts)
    # ge[i, j] == True iff point j covers point i; with distinct pairs,
    # j != i and ge[i, j] means j strictly dominates i.
    ge = (xs[None, :] >= xs[:, None]) & (ys[None, :] >= ys[:, None])
    np.fill_diagonal(ge, False)
    dominated = ge.any(axis=1)
    keep = [p for p, d in zip(pts, dominated) if not d]
    keep.sort(key=lambda p: p.x)
    return Skyline(tuple(keep))
