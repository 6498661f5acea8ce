"""A one-round distributed quantile protocol.

Each site ships the exact (eps/2)-quantiles of its sorted local values; the
coordinator answers any rank query from those summaries alone, with error
at most (eps/2) * N in rank.  Used by the tradeoff protocol to cut the
plane into balanced vertical strips.

Pass epsilon as a Fraction (e.g. Fraction(1, d)) to keep every rank
comparison exact; floats are accepted and behave identically away from
ties of the rank arithmetic.
"""
from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

__all__ = [
    "NEG_INF",
    "QuantileSummary",
    "local_summary",
    "answer_rank",
    "answer_rank_weighted",
    "strip_boundaries",
    "strip_index",
]

NEG_INF = float("-inf")

Epsilon = Fraction | float


@dataclass(frozen=True)
class QuantileSummary:
    site: int
    count: int
    values: tuple[float, ...]


def _summary_size(epsilon: Epsilon) -> int:
    return math.ceil(2 / epsilon)


def local_summary(values: Sequence[float], epsilon: Epsilon, site: int = 0) -> QuantileSummary:
    """Exact (eps/2)-quantiles of a sorted value list.

    Returns the elements at ranks ceil(j * (eps/2) * n) for j = 1..ceil(2/eps),
    clamped to [1, n].  A site with fewer than ceil(2/eps) values sends them
    all; an empty site sends an empty summary.
    """
    n = len(values)
    if n == 0:
        return QuantileSummary(site, 0, ())
    m = _summary_size(epsilon)
    if n < m:
        return QuantileSummary(site, n, tuple(values))
    half = Fraction(epsilon) / 2
    picks = []
    for j in range(1, m + 1):
        rank = math.ceil(j * half * n)
        rank = min(max(rank, 1), n)
        picks.append(values[rank - 1])
    return QuantileSummary(site, n, tuple(picks))


def _weights(summaries: Sequence[QuantileSummary], epsilons: Sequence[Epsilon]) -> list[Fraction]:
    """Per-summary rank weight of one summary value.

    A rank-selected summary value stands for (eps/2) * n_i local elements; a
    site that sent everything (n_i < ceil(2/eps)) is exact, weight 1.
    """
    out = []
    for summ, eps in zip(summaries, epsilons):
        if summ.count and summ.count >= _summary_size(eps):
            out.append(Fraction(eps) * summ.count / 2)
        else:
            out.append(Fraction(1))
    return out


def answer_rank_weighted(
    summaries: Sequence[QuantileSummary],
    beta: Fraction | float,
    epsilons: Sequence[Epsilon],
) -> float:
    """answer_rank over summaries built with per-site epsilons."""
    if beta <= 0:
        return NEG_INF
    weights = _weights(summaries, epsilons)
    candidates = sorted({v for s in summaries for v in s.values})
    best = NEG_INF
    for v in candidates:
        estimate = Fraction(0)
        for summ, w in zip(summaries, weights):
            below = bisect_left(summ.values, v)
            if below:
                estimate += w * below
        if estimate <= beta:
            best = v
        else:
            break
    return best


def answer_rank(
    summaries: Sequence[QuantileSummary],
    beta: Fraction | float,
    epsilon: Epsilon,
) -> float:
    """Largest summary value v whose estimated rank does not exceed beta.

    The estimate for v is sum over sites of n_i(v) * (eps/2 * n_i), where
    n_i(v) counts the site's summary values below v.  The true rank of the
    answer lies within (eps/2) * (total count) of beta.  beta <= 0 returns
    the -inf sentinel: no element is required below the split.
    """
    return answer_rank_weighted(summaries, beta, [epsilon] * len(summaries))


def strip_boundaries(
    summaries: Sequence[QuantileSummary],
    d: int,
    epsilon: Epsilon | None = None,
) -> list[float]:
    """The d-1 split values carving the x-axis into d strips.

    Boundary j answers the rank query beta = j * N / d.  Strips are
    left-open/right-closed; the last strip is unbounded to the right.
    Duplicate boundaries (heavily skewed data) simply yield empty strips.
    """
    if d < 1:
        raise ValueError("strip count must be >= 1")
    if epsilon is None:
        epsilon = Fraction(1, d)
    total = sum(s.count for s in summaries)
    epsilons = [epsilon] * len(summaries)
    bounds = []
    for j in range(1, d):
        beta = Fraction(j * total, d)
        bounds.append(answer_rank_weighted(summaries, beta, epsilons))
    return bounds


def strip_index(x: float, boundaries: Sequence[float]) -> int:
    """0-based strip of x given sorted boundaries (strip j is (b[j-1], b[j]])."""
    return bisect_left(boundaries, x)


def true_rank_window(values: Sequence[float], v: float) -> tuple[int, int]:
    """[#values < v, #values <= v] in a sorted list; the rank of v under ties."""
    return bisect_left(values, v), bisect_right(values, v)
