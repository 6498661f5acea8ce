"""Synthetic generators, adversarial reduction instances, partitioners, and
CSV ingestion.

All generators are deterministic under a fixed seed.  Coordinate pairs are
kept distinct everywhere: the synthetic generators resample exact
collisions, and the set-disjointness instances perturb duplicate pairs
deterministically.
"""
from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .core import Point
from .horizontal import HorizontalInstance, ParameterError, make_horizontal
from .vertical import VerticalInstance, vertical_split

__all__ = [
    "GenSpec",
    "gen_synthetic",
    "expand_bits",
    "gen_staircase",
    "gen_one_round_hard",
    "gen_vertical_disj",
    "partition",
    "ingest_csv",
]

log = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)
# x-perturbation unit for reduction instances with coincident coordinates
PERTURB = 2.0**-40


@dataclass(frozen=True)
class GenSpec:
    """kind: indi | corr | anti.  corr/anti scatter per_line points around
    each of `lines` lines perpendicular to their diagonal; lines * per_line
    must equal n."""

    kind: str
    n: int
    lines: int | None = None
    per_line: int | None = None
    seed: int = 0


def _resolve(spec: GenSpec) -> tuple[int, int]:
    # default keeps many more lines than points per line, like the full-scale
    # datasets (200k lines of 100 points); desk scale divides both axes
    if spec.lines is not None:
        lines = spec.lines
    elif spec.per_line is not None:
        lines = max(1, spec.n // spec.per_line)
    else:
        lines = max(1, spec.n // 10)
    per_line = spec.per_line if spec.per_line is not None else max(1, spec.n // lines)
    if lines * per_line != spec.n:
        raise ParameterError(f"lines * per_line must equal n ({lines} * {per_line} != {spec.n})")
    return lines, per_line


def gen_synthetic(spec: GenSpec) -> list[Point]:
    """INDI: iid uniform on the unit square.  CORR/ANTI: intercepts
    t ~ N(0.5, 0.15) clamped to [0, 1] along the main/anti diagonal, points
    offset along the perpendicular (sigma 0.05 for corr, 0.10 for anti),
    clamped to the unit square."""
    if spec.n < 1:
        raise ParameterError("n must be >= 1")
    rng = np.random.default_rng(spec.seed)
    if spec.kind == "indi":
        xs = rng.random(spec.n)
        ys = rng.random(spec.n)
    elif spec.kind in ("corr", "anti"):
        lines, per_line = _resolve(spec)
        t = np.clip(rng.normal(0.5, 0.15, lines), 0.0, 1.0)
        t = np.repeat(t, per_line)
        # anti needs a wider band: with a hairline band no point is ever
        # near the top of both orders, which flattens interactive pruning's
        # rho tradeoff into a monotone curve
        sigma = 0.05 if spec.kind == "corr" else 0.10
        off = rng.normal(0.0, sigma, spec.n) / SQRT2
        if spec.kind == "corr":
            xs = np.clip(t + off, 0.0, 1.0)
            ys = np.clip(t - off, 0.0, 1.0)
        else:
            xs = np.clip(t + off, 0.0, 1.0)
            ys = np.clip(1.0 - t + off, 0.0, 1.0)
    else:
        raise ParameterError(f"unknown generator kind {spec.kind!r}")
    # resample exact coordinate collisions (rare; mostly corner clamps)
    for _ in range(100):
        _, first = np.unique(np.stack([xs, ys], axis=1), axis=0, return_index=True)
        dup = np.setdiff1d(np.arange(spec.n), first)
        if dup.size == 0:
            break
        xs[dup] = rng.random(dup.size)
        ys[dup] = rng.random(dup.size)
    else:
        raise ParameterError("could not deduplicate generated coordinates")
    return [Point(i, float(xs[i]), float(ys[i])) for i in range(spec.n)]


def expand_bits(bits: Sequence[int]) -> list[int]:
    """Double each bit: 0 -> 01, 1 -> 10."""
    out = []
    for b in bits:
        out.extend((1, 0) if b else (0, 1))
    return out


def gen_staircase(bits: Sequence[int], start_id: int = 0) -> list[Point]:
    """Corner points of the staircase encoding a bit vector in an m x m grid.

    The expanded vector drives a walk from the top-left (0, m): a 0 step
    goes right, a 1 step goes down.  Emitted corners are the outer bends
    (right-then-down turns) plus the start when the walk opens downward and
    the end when it closes rightward; per column j that is (j, m-j+1) for a
    0 bit and (j, m-j) when bits j and j+1 are both 1.  The result is an
    antichain: a staircase is its own skyline.
    """
    m = len(bits)
    pts: list[tuple[float, float]] = []
    if m and bits[0]:
        pts.append((0.0, float(m)))
    for j in range(1, m + 1):
        if not bits[j - 1]:
            pts.append((float(j), float(m - j + 1)))
        elif j < m and bits[j]:
            pts.append((float(j), float(m - j)))
    if m and bits[-1]:
        pts.append((float(m), 0.0))
    return [Point(start_id + i, x, y) for i, (x, y) in enumerate(pts)]


def gen_one_round_hard(bits: Sequence[int], v: int) -> HorizontalInstance:
    """Two-site instance showing one-round hardness: site 1 holds the
    staircase of `bits`, site 2 the grid's upper-right corner when v = 1
    (its single point then dominates everything) or the lower-left corner
    when v = 0 (the whole staircase stays on the skyline)."""
    m = len(bits)
    stair = gen_staircase(bits)
    corner = Point(len(stair), float(m), float(m)) if v else Point(len(stair), 0.0, 0.0)
    return make_horizontal([stair, [corner]], "custom")


def gen_vertical_disj(a: Iterable[int], b: Iterable[int], n: int) -> VerticalInstance:
    """Two-party set-disjointness instance over ids 1..n.

    Alice's coordinate is 2 for members of A else 1; Bob's likewise for B.
    The first point of each coordinate class keeps its exact position and
    later duplicates get x lowered by id * 2^-40, so the skyline is a
    single point exactly when A and B intersect (given both sets nonempty).
    """
    a_set, b_set = set(a), set(b)
    if not a_set <= set(range(1, n + 1)) or not b_set <= set(range(1, n + 1)):
        raise ParameterError("A and B must be subsets of 1..n")
    pts = []
    seen: set[tuple[float, float]] = set()
    for pid in range(1, n + 1):
        x = 2.0 if pid in a_set else 1.0
        y = 2.0 if pid in b_set else 1.0
        if (x, y) in seen:
            x -= pid * PERTURB
        else:
            seen.add((x, y))
        pts.append(Point(pid, x, y))
    return vertical_split(pts)


def partition(points: Sequence[Point], scheme: str, s: int, seed: int = 0) -> HorizontalInstance:
    """Split points across s sites: random (iid uniform site), by-key
    (multiplicative hash of the id), or sorted (contiguous x-runs of
    near-equal size; equal x values never straddle a site boundary)."""
    if s < 1:
        raise ParameterError("s must be >= 1")
    sites: list[list[Point]] = [[] for _ in range(s)]
    if scheme == "random":
        rng = np.random.default_rng(seed)
        for p, site in zip(points, rng.integers(0, s, len(points))):
            sites[site].append(p)
    elif scheme == "by-key":
        for p in points:
            sites[(p.id * 0x9E3779B97F4A7C15 % 2**64) % s].append(p)
    elif scheme == "sorted":
        ordered = sorted(points, key=lambda p: (p.x, p.id))
        n = len(ordered)
        cut = 0
        for i in range(s):
            end = min(n, round(n * (i + 1) / s))
            end = max(end, cut)
            while 0 < end < n and ordered[end].x == ordered[end - 1].x:
                end += 1
            sites[i] = ordered[cut:end]
            cut = end
        sites[s - 1].extend(ordered[cut:])
    else:
        raise ParameterError(f"unknown partition scheme {scheme!r}")
    return make_horizontal(sites, scheme if scheme != "by-key" else "by-key")


def ingest_csv(
    path: str | Path,
    x_column: str,
    y_column: str,
    negate_x: bool = False,
    negate_y: bool = False,
    dedupe: bool = False,
) -> list[Point]:
    """Read points from a headered CSV.

    Rows become points with sequential ids; the negate flags turn
    minimization attributes into the maximize-both convention.  Unparseable
    rows are skipped with a counted warning.  dedupe drops exact duplicate
    coordinate pairs, keeping the lowest id; without it duplicates raise at
    skyline time.
    """
    pts: list[Point] = []
    skipped = 0
    seen: set[tuple[float, float]] = set()
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or x_column not in reader.fieldnames or y_column not in reader.fieldnames:
            raise ParameterError(f"columns {x_column!r}, {y_column!r} not found in {path}")
        for i, row in enumerate(reader):
            try:
                x = float(row[x_column])
                y = float(row[y_column])
            except (TypeError, ValueError):
                skipped += 1
                continue
            if negate_x:
                x = -x
            if negate_y:
                y = -y
            if dedupe:
                if (x, y) in seen:
                    continue
                seen.add((x, y))
            pts.append(Point(len(pts), x, y))
    if skipped:
        log.warning("skipped %d unparseable rows in %s", skipped, path)
    if not pts:
        raise ParameterError(f"no usable rows in {path}")
    return pts
