"""The four horizontal-partition skyline protocols.

naive    -- one round, every site ships its whole local skyline.
optimal  -- confirms the global max-x / max-y points round by round;
            ceil(k/2) rounds and O(k*s) words.
tradeoff -- r-round budget; steps of quantile-strip pruning, then one
            bulk upload of whatever survived.
sorted   -- two rounds when the partition is ordered by x.

Each protocol is a coordinator logic plus a site logic driven by
coordsim.run_protocol.  Sites reply with the 1-word EMPTY flag the first
time they run out of points, after which the coordinator stops contacting
them.
"""
from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable

from .core import Point, Skyline, covers, skyline
from .coordsim import CostReport, Transcript, run_protocol
from .quantiles import QuantileSummary, answer_rank_weighted, local_summary, strip_index

__all__ = [
    "EMPTY",
    "HorizontalInstance",
    "make_horizontal",
    "ParameterError",
    "run_naive",
    "run_optimal",
    "run_tradeoff",
    "run_sorted",
]

EMPTY = "empty"


class ParameterError(ValueError):
    """An algorithm parameter or precondition was violated."""


@dataclass(frozen=True)
class HorizontalInstance:
    """A point set split across s sites; partition_kind is one of
    random | by-key | sorted | custom (sorted enables run_sorted)."""

    sites: tuple[tuple[Point, ...], ...]
    partition_kind: str

    @property
    def s(self) -> int:
        return len(self.sites)

    @property
    def n(self) -> int:
        return sum(len(site) for site in self.sites)

    def union(self) -> list[Point]:
        return [p for site in self.sites for p in site]


def make_horizontal(sites: Iterable[Iterable[Point]], partition_kind: str) -> HorizontalInstance:
    """Validate and freeze a horizontal instance.

    Ids must be unique across sites and coordinate pairs distinct; a sorted
    partition must satisfy max x of site i <= min x of site i+1.
    """
    frozen = tuple(tuple(site) for site in sites)
    ids: set[int] = set()
    coords: set[tuple[float, float]] = set()
    for site in frozen:
        for p in site:
            if p.id in ids:
                raise ParameterError(f"duplicate id {p.id} across sites")
            ids.add(p.id)
            if (p.x, p.y) in coords:
                raise ParameterError(f"duplicate coordinates {(p.x, p.y)}")
            coords.add((p.x, p.y))
    if partition_kind == "sorted":
        prev_max = float("-inf")
        for site in frozen:
            if not site:
                continue
            xs = [p.x for p in site]
            if min(xs) < prev_max:
                raise ParameterError("sorted partition invariant violated")
            prev_max = max(xs)
    return HorizontalInstance(frozen, partition_kind)


def _round_cap(instance: HorizontalInstance) -> int:
    return 10 * max(instance.n, 1)


class _Window:
    """A site's remaining local-skyline points, sorted by increasing x.

    Pruning by a confirmed point removes one contiguous segment (the points
    it covers), so every point is deleted at most once over the whole run.
    """

    def __init__(self, points: Iterable[Point]):
        self.points: list[Point] = list(skyline(points).points)

    def __len__(self) -> int:
        return len(self.points)

    def prune(self, confirmed: Iterable[Point]) -> None:
        for c in confirmed:
            w = self.points
            if not w:
                return
            lo = bisect_left(w, -c.y, key=lambda p: -p.y)  # first point with y <= c.y
            hi = bisect_right(w, c.x, key=lambda p: p.x) - 1  # last point with x <= c.x
            if lo <= hi:
                del w[lo : hi + 1]

    def max_y_point(self) -> Point:
        return self.points[0]

    def max_x_point(self) -> Point:
        return self.points[-1]


# ---------------------------------------------------------------------------
# naive


class NaiveSite:
    def __init__(self, points: Iterable[Point]):
        self.window = _Window(points)

    def respond(self, payload: Any) -> Any:
        return tuple(self.window.points)


class NaiveCoordinator:
    def __init__(self, s: int):
        self.s = s
        self.received: list[Point] = []
        self.done = False

    def requests(self):
        if self.done:
            return None
        return {i: None for i in range(self.s)}

    def receive(self, replies: dict[int, Any]) -> None:
        for pts in replies.values():
            self.received.extend(pts)
        self.done = True

    def result(self) -> Skyline:
        return skyline(self.received)


def run_naive(instance: HorizontalInstance) -> tuple[Skyline, Transcript, CostReport]:
    sites = [NaiveSite(pts) for pts in instance.sites]
    coord = NaiveCoordinator(instance.s)
    return run_protocol(coord, sites, round_cap=_round_cap(instance))


# ---------------------------------------------------------------------------
# optimal


class OptimalSite:
    """Replies with its max-y and max-x points each round.

    Small windows are disclosed completely (interior coordinates ride as
    scalars, never as confirmable points) and larger ones add the bounding
    corner of the interior, so the coordinator can usually prove a site
    exhausted without spending a discovery round on it.  Formats,
    distinguished by shape:

      small window  (max-y pt[, max-x pt], x1, y1, ...)   whole window
      large window  (count, interior max x, interior max y, max-y pt, max-x pt)

    Full disclosure covers windows of up to 4 points in the first reply and
    6 afterwards; those ceilings keep every run within the 8*k*s word
    budget (first-round replies stay at 8 words for the k = 1 case, and 12
    words per site fit once two points are confirmed and k >= 3).
    """

    def __init__(self, points: Iterable[Point]):
        self.window = _Window(points)
        self.replied = False

    def respond(self, payload: Any) -> Any:
        self.window.prune(payload)
        limit = 6 if self.replied else 4
        self.replied = True
        w = self.window.points
        if not w:
            return EMPTY
        if len(w) <= 2:
            return tuple(w)
        if len(w) <= limit:
            inner = [c for p in w[1:-1] for c in (p.x, p.y)]
            return (w[0], w[-1], *inner)
        return (len(w), w[-2].x, w[1].y, w[0], w[-1])


class OptimalCoordinator:
    """Confirms the global max-x and max-y of the still-held points.

    Termination bookkeeping, all free of extra rounds:
      * a site replying EMPTY is retired;
      * a reply whose count matches the points sent exposes the site's whole
        remainder, which the coordinator prunes by simulation;
      * a confirmed max-y point whose x reaches a site's reported max-x (or
        a confirmed max-x point whose y reaches its max-y) covers the whole
        window, because on the other axis it bounds everything still alive;
        the same argument against the interior corner retires sites whose
        two extremes are covered crosswise;
      * a round confirming a single coinciding max-x/max-y point dominates
        everything left anywhere, so the run stops on the spot.
    """

    def __init__(self, s: int):
        self.active = set(range(s))
        self.confirmed: list[Point] = []
        self.newly: tuple[Point, ...] = ()
        self.best_maxy_x = float("-inf")  # largest x among confirmed max-y points
        self.best_maxx_y = float("-inf")  # largest y among confirmed max-x points
        self.done = False

    def requests(self):
        if self.done or not self.active:
            return None
        return {i: self.newly for i in sorted(self.active)}

    def _dead(self, known: list[Point], mid_x: float, mid_y: float) -> bool:
        if any(not any(covers(c, p) for c in self.confirmed) for p in known):
            return False
        return mid_x <= self.best_maxy_x or mid_y <= self.best_maxx_y

    @staticmethod
    def _decode(reply) -> tuple[list[Point], list[Point], float, float]:
        """-> (extreme candidates, all known points, interior corner x, y)."""
        if isinstance(reply[0], Point):
            pts = [p for p in reply if isinstance(p, Point)]
            inner = reply[len(pts) :]
            known = pts + [Point(-1, inner[i], inner[i + 1]) for i in range(0, len(inner), 2)]
            return pts, known, float("-inf"), float("-inf")
        _, mid_x, mid_y, top, right = reply
        return [top, right], [top, right], mid_x, mid_y

    def receive(self, replies: dict[int, Any]) -> None:
        reported: dict[int, tuple[list[Point], float, float]] = {}
        candidates: list[Point] = []
        for site, reply in replies.items():
            if reply == EMPTY:
                self.active.discard(site)
                continue
            pts, known, mid_x, mid_y = self._decode(reply)
            reported[site] = (known, mid_x, mid_y)
            candidates.extend(pts)
        if not candidates:
            self.done = True
            return
        top = max(candidates, key=lambda p: (p.y, p.x))
        right = max(candidates, key=lambda p: (p.x, p.y))
        new = [top] if top is right else [top, right]
        self.confirmed.extend(new)
        self.newly = tuple(new)
        if len(new) == 1:
            # The single point is both extremes, so it covers every
            # remaining point at every site: nothing is left to find.
            self.done = True
            self.active.clear()
            return
        self.best_maxy_x = max(self.best_maxy_x, top.x)
        self.best_maxx_y = max(self.best_maxx_y, right.y)
        for site, (known, mid_x, mid_y) in reported.items():
            if self._dead(known, mid_x, mid_y):
                self.active.discard(site)
        if not self.active:
            self.done = True

    def result(self) -> Skyline:
        return Skyline(tuple(sorted(self.confirmed, key=lambda p: p.x)))


def run_optimal(instance: HorizontalInstance) -> tuple[Skyline, Transcript, CostReport]:
    sites = [OptimalSite(pts) for pts in instance.sites]
    coord = OptimalCoordinator(instance.s)
    return run_protocol(coord, sites, round_cap=_round_cap(instance))


# ---------------------------------------------------------------------------
# tradeoff


def strip_count_guess(k_guess: int, t: int, n_estimate: int, s: int) -> int:
    """Strip count for one pruning step, ceil'd and floored at 1.

    Real-valued form: (2k/(t-1)) * (n(t-1)/(2s))^(1/t), with n the best
    available bound on the points still held.
    """
    if t <= 1 or n_estimate <= 0:
        return 1
    base = n_estimate * (t - 1) / (2 * s)
    value = (2 * k_guess / (t - 1)) * base ** (1.0 / t)
    return max(1, math.ceil(value))


def fixed_strip_count(k: int, t: int, n: int, s: int) -> int:
    """Known-k strip count: (2k/(t-1)) * (n(t-1)/(2sk))^(1/t)."""
    if t <= 1:
        return 1
    base = n * (t - 1) / (2 * s * k)
    return max(1, math.ceil((2 * k / (t - 1)) * base ** (1.0 / t)))


class TradeoffSite:
    """Cycles (quantile reply, strip-maxima reply) per step, then ships all.

    Round phases are implied by position: sites and coordinator advance in
    lockstep since every active site is contacted every round.
    """

    def __init__(self, points: Iterable[Point], r: int, s: int, fixed_d: int | None = None):
        self.window = _Window(points)
        self.t = math.ceil(r / 2)
        self.s = s
        self.fixed_d = fixed_d
        self.step = 0
        self.phase = "quantile"
        self.boundaries: tuple[float, ...] = ()

    def respond(self, payload: Any) -> Any:
        if self.phase == "quantile":
            self.window.prune(payload)
            if self.step == self.t - 1:  # final round: ship the remainder
                return tuple(self.window.points)
            if not len(self.window):
                return EMPTY
            self.phase = "maxima"
            k_guess = (self.t - 1) if self.step == 0 else max(1, len(payload) * (self.t - 1))
            d = self.fixed_d or strip_count_guess(k_guess, self.t, self.s * len(self.window), self.s)
            xs = [p.x for p in self.window.points]
            summary = local_summary(xs, Fraction(1, d))
            return (summary.count, *summary.values)
        # maxima round: report the top-y point of each occupied strip
        self.phase = "quantile"
        self.step += 1
        best: dict[int, Point] = {}
        for p in self.window.points:
            idx = strip_index(p.x, payload)
            cur = best.get(idx)
            if cur is None or (p.y, p.x) > (cur.y, cur.x):
                best[idx] = p
        return tuple((idx, best[idx]) for idx in sorted(best))


class TradeoffCoordinator:
    def __init__(self, s: int, n: int, r: int, fixed_d: int | None = None):
        if r < 3:
            raise ParameterError("tradeoff needs a round budget r >= 3")
        self.s = s
        self.n = n
        self.t = math.ceil(r / 2)
        self.fixed_d = fixed_d
        self.active = set(range(s))
        self.confirmed: list[Point] = []
        self.shipped: list[Point] = []
        self.newly: tuple[Point, ...] = ()
        self.last_y = 0
        self.step = 0
        self.phase = "quantile"
        self.boundaries: list[float] = []
        self.y_history: list[int] = []
        self.done = False

    def requests(self):
        if self.done or not self.active:
            return None
        if self.phase == "quantile":
            return {i: self.newly for i in sorted(self.active)}
        return {i: tuple(self.boundaries) for i in sorted(self.active)}

    def receive(self, replies: dict[int, Any]) -> None:
        if self.phase == "quantile":
            if self.step == self.t - 1:
                for pts in replies.values():
                    self.shipped.extend(pts)
                self.done = True
                return
            summaries: list[QuantileSummary] = []
            for site, reply in sorted(replies.items()):
                if reply == EMPTY:
                    self.active.discard(site)
                    continue
                count, *values = reply
                summaries.append(QuantileSummary(site, count, tuple(values)))
            if not summaries:
                self.done = True
                return
            total = sum(s.count for s in summaries)
            k_guess = (self.t - 1) if self.step == 0 else max(1, self.last_y * (self.t - 1))
            if self.fixed_d:
                d = min(self.fixed_d, total)
            else:
                d = min(strip_count_guess(k_guess, self.t, total, self.s), total)
            epsilons = [
                Fraction(1, self.fixed_d or strip_count_guess(k_guess, self.t, self.s * s.count, self.s))
                for s in summaries
            ]
            self.boundaries = [
                answer_rank_weighted(summaries, Fraction(j * total, d), epsilons)
                for j in range(1, d)
            ]
            self.phase = "maxima"
        else:
            best: dict[int, Point] = {}
            for _, reply in sorted(replies.items()):
                for idx, p in reply:
                    cur = best.get(idx)
                    if cur is None or (p.y, p.x) > (cur.y, cur.x):
                        best[idx] = p
            new = list(skyline(best.values()).points)
            self.confirmed.extend(new)
            self.newly = tuple(new)
            self.last_y = len(new)
            self.y_history.append(len(new))
            self.step += 1
            self.phase = "quantile"

    def result(self) -> Skyline:
        return skyline(self.confirmed + self.shipped)


def run_tradeoff(
    instance: HorizontalInstance,
    r: int,
    known_k: int | None = None,
) -> tuple[Skyline, Transcript, CostReport]:
    """Round-budgeted protocol; r >= 3.  known_k switches to the fixed
    strip count d(k) for bound experiments."""
    if r < 3:
        raise ParameterError("tradeoff needs a round budget r >= 3")
    t = math.ceil(r / 2)
    fixed_d = fixed_strip_count(known_k, t, instance.n, instance.s) if known_k else None
    sites = [TradeoffSite(pts, r, instance.s, fixed_d) for pts in instance.sites]
    coord = TradeoffCoordinator(instance.s, instance.n, r, fixed_d)
    return run_protocol(coord, sites, round_cap=_round_cap(instance))


# ---------------------------------------------------------------------------
# sorted


class SortedSite:
    def __init__(self, points: Iterable[Point]):
        self.window = _Window(points)
        self.phase = "top"

    def respond(self, payload: Any) -> Any:
        if self.phase == "top":
            self.phase = "send"
            if not len(self.window):
                return EMPTY
            return self.window.max_y_point().y
        z = payload
        return tuple(p for p in self.window.points if p.y > z)


class SortedCoordinator:
    """Round 1 collects each site's top y value; round 2 sends the suffix
    maxima z_i and collects everything above them."""

    def __init__(self, s: int):
        self.s = s
        self.phase = "top"
        self.tops: dict[int, float] = {}
        self.received: list[Point] = []
        self.done = False

    def requests(self):
        if self.done:
            return None
        if self.phase == "top":
            return {i: None for i in range(self.s)}
        suffix = float("-inf")
        z: dict[int, float] = {}
        for i in sorted(self.tops, reverse=True):
            z[i] = suffix
            suffix = max(suffix, self.tops[i])
        return dict(sorted(z.items()))

    def receive(self, replies: dict[int, Any]) -> None:
        if self.phase == "top":
            for site, reply in replies.items():
                if reply != EMPTY:
                    self.tops[site] = reply
            self.phase = "send"
            if not self.tops:
                self.done = True
            return
        for pts in replies.values():
            self.received.extend(pts)
        self.done = True

    def result(self) -> Skyline:
        return skyline(self.received)


def run_sorted(instance: HorizontalInstance) -> tuple[Skyline, Transcript, CostReport]:
    if instance.partition_kind != "sorted":
        raise ParameterError("run_sorted requires a sorted partition")
    prev_max = float("-inf")
    for site in instance.sites:
        if not site:
            continue
        xs = [p.x for p in site]
        if min(xs) < prev_max:
            raise ParameterError("sorted partition invariant violated")
        prev_max = max(xs)
    sites = [SortedSite(pts) for pts in instance.sites]
    coord = SortedCoordinator(instance.s)
    return run_protocol(coord, sites, round_cap=_round_cap(instance))
