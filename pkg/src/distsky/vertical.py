"""Vertical-partition protocols: interactive pruning and a naive baseline.

Alice holds (x, id) for every point, Bob holds (id, y).  A point is
recovered once the coordinator knows both of its coordinates.  Interactive
pruning fetches sorted groups from the side whose gap between fetch
frontier and prune line is smaller, cross-recovering the opposite
coordinates, until every skyline point is provably in hand.

The stores are passive: each down-message is a self-describing query
(None -> splits + first group, bare int -> that group, tuple of ids ->
coordinates for those ids, ((f, l),) -> bulk groups f..l-1).
"""
from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import Any, Iterable, Sequence

from .core import Point, Skyline, skyline
from .coordsim import CostReport, Transcript, run_protocol
from .horizontal import ParameterError

__all__ = [
    "ALICE",
    "BOB",
    "VerticalInstance",
    "vertical_split",
    "join_instance",
    "run_prune",
    "run_vertical_naive",
]

ALICE = 0
BOB = 1


@dataclass(frozen=True)
class VerticalInstance:
    """alice: (x, id) sorted by decreasing x; bob: (id, y) sorted by decreasing y."""

    alice: tuple[tuple[float, int], ...]
    bob: tuple[tuple[int, float], ...]

    @property
    def n(self) -> int:
        return len(self.alice)


def vertical_split(points: Iterable[Point]) -> VerticalInstance:
    pts = list(points)
    alice = tuple((p.x, p.id) for p in sorted(pts, key=lambda p: (-p.x, p.id)))
    bob = tuple((p.id, p.y) for p in sorted(pts, key=lambda p: (-p.y, p.id)))
    return VerticalInstance(alice, bob)


def join_instance(instance: VerticalInstance) -> list[Point]:
    """Join the two columns back into points (validates the shared id set)."""
    ys = {pid: y for pid, y in instance.bob}
    if len(ys) != len(instance.bob):
        raise ParameterError("duplicate id on Bob's side")
    pts = []
    seen: set[int] = set()
    for x, pid in instance.alice:
        if pid in seen:
            raise ParameterError("duplicate id on Alice's side")
        seen.add(pid)
        if pid not in ys:
            raise ParameterError(f"id {pid} missing on Bob's side")
        pts.append(Point(pid, x, ys[pid]))
    if len(pts) != len(ys):
        raise ParameterError("id sets differ between sides")
    return pts


class ColumnStore:
    """One side's sorted column, chunked into groups of size ceil(n/rho)."""

    def __init__(self, entries: Sequence[tuple], id_of, coord_of, group_size: int):
        self.entries = list(entries)
        self.id_of = id_of
        self.size = group_size
        n = len(self.entries)
        self.group_count = max(1, math.ceil(n / group_size)) if n else 1
        # split value m: the smallest coordinate inside group m (1-based)
        self.splits = tuple(
            coord_of(self.entries[min(m * group_size, n) - 1]) for m in range(1, self.group_count)
        )
        self.coords = {id_of(e): coord_of(e) for e in self.entries}

    def group(self, m: int) -> tuple:
        lo = (m - 1) * self.size
        return tuple(self.entries[lo : lo + self.size])

    def respond(self, payload: Any) -> Any:
        if payload is None:
            return (self.splits, self.group(1))
        if isinstance(payload, int):
            return self.group(payload)
        if payload and isinstance(payload[0], tuple):
            (f, l) = payload[0]
            out: list[tuple] = []
            for m in range(f, l):
                out.extend(self.group(m))
            return tuple(out)
        return tuple((pid, self.coords[pid]) for pid in payload)


class PruneCoordinator:
    """Interactive pruning under a round budget.

    f[side]: next group to fetch (1-based; 2 once the first groups are in).
    l[side]: first pruned group; group_count + 1 means nothing pruned yet.
    Stage 2 runs steps of two rounds while 2j <= r - 4 and both gaps stay
    open; stage 3 bulk-fetches the smaller gap.  A cross-recovery round is
    skipped when every id in the fetched group is already known, so runs
    may finish under budget.  `trace` records fetches and prune-line moves
    for regression tests.
    """

    def __init__(self, n: int, rho: int, r: int):
        if rho < 1:
            raise ParameterError("rho must be >= 1")
        if r < 6:
            raise ParameterError("interactive pruning needs a round budget r >= 6")
        self.r = r
        self.size = max(1, math.ceil(n / rho)) if n else 1
        self.g = max(1, math.ceil(n / self.size)) if n else 1
        self.xs: dict[int, float] = {}
        self.ys: dict[int, float] = {}
        self.splits_asc: dict[int, list[float]] = {ALICE: [], BOB: []}
        self.f = {ALICE: 2, BOB: 2}
        self.l = {ALICE: self.g + 1, BOB: self.g + 1}
        self.step = 0
        self.phase: Any = "start" if n else "done"
        self.pending: Any = None
        self.trace: list[tuple] = []

    # -- bookkeeping -------------------------------------------------------

    def recovered_count(self) -> int:
        return len(self.xs.keys() & self.ys.keys())

    def _coord_map(self, side: int) -> dict[int, float]:
        return self.xs if side == ALICE else self.ys

    def _take(self, side: int, wires: Iterable[tuple]) -> list[int]:
        got = self._coord_map(side)
        ids = []
        for wire in wires:
            if side == ALICE:
                x, pid = wire
                got[pid] = x
            else:
                pid, y = wire
                got[pid] = y
            ids.append(pid)
        return ids

    def _min_group_index(self, side: int, coord: float) -> int:
        """Smallest group index consistent with the split values.

        Adding one to this yields a sound prune line even when equal
        coordinates straddle a group boundary: every entry in a group at or
        beyond the line has coordinate <= coord.
        """
        splits = self.splits_asc[side]
        greater = len(splits) - bisect_right(splits, coord)
        return greater + 1

    def _lower_l(self, fetched_side: int, ids: Sequence[int]) -> None:
        """A fetched group lowers the *other* side's prune line."""
        other = BOB if fetched_side == ALICE else ALICE
        coords = self._coord_map(other)
        cand = min(self._min_group_index(other, coords[pid]) for pid in ids) + 1
        self.l[other] = min(self.l[other], cand)

    def _missing(self, ids: Sequence[int], known_side: int) -> tuple[int, tuple[int, ...]]:
        other = BOB if known_side == ALICE else ALICE
        coords = self._coord_map(other)
        return other, tuple(pid for pid in ids if pid not in coords)

    def _gap(self, side: int) -> int:
        return self.l[side] - self.f[side]

    def _pick_side(self) -> int:
        return ALICE if self._gap(ALICE) <= self._gap(BOB) else BOB

    def _advance(self) -> None:
        if self._gap(ALICE) > 0 and self._gap(BOB) > 0 and 2 * (self.step + 1) <= self.r - 4:
            self.step += 1
            self.phase = ("group", self._pick_side())
        elif self._gap(ALICE) > 0 and self._gap(BOB) > 0:
            self.phase = ("bulk", self._pick_side())
        else:
            self.phase = "done"

    def _finish_stage1(self) -> None:
        ids_x, ids_y = self.pending
        self.pending = None
        self._lower_l(ALICE, ids_x)  # G_x1 bounds l_y through g_y of its points
        self._lower_l(BOB, ids_y)  # G_y1 bounds l_x through g_x of its points
        self.trace.append(("stage1", self.l[ALICE], self.l[BOB]))
        self._advance()

    def _finish_step(self, side: int, ids: Sequence[int]) -> None:
        self._lower_l(side, ids)
        self.trace.append(("l", self.l[ALICE], self.l[BOB]))
        self._advance()

    # -- engine interface ----------------------------------------------------

    def requests(self):
        while True:
            if self.phase == "done":
                return None
            if self.phase == "start":
                return {ALICE: None, BOB: None}
            if self.phase == "cross1":
                ids_x, ids_y = self.pending
                reqs = {}
                need_x = tuple(pid for pid in ids_y if pid not in self.xs)
                need_y = tuple(pid for pid in ids_x if pid not in self.ys)
                if need_x:
                    reqs[ALICE] = need_x
                if need_y:
                    reqs[BOB] = need_y
                if reqs:
                    return reqs
                self._finish_stage1()
                continue
            kind, side = self.phase[0], self.phase[1]
            if kind == "group":
                return {side: self.f[side]}
            if kind == "cross":
                other, needs, _, _ = self.pending
                return {other: needs}
            if kind == "bulk":
                return {side: ((self.f[side], self.l[side]),)}
            if kind == "bulkcross":
                return {self.phase[1]: self.phase[2]}
            raise AssertionError(self.phase)

    def receive(self, replies: dict[int, Any]) -> None:
        if self.phase == "start":
            splits_x, gx1 = replies[ALICE]
            splits_y, gy1 = replies[BOB]
            self.splits_asc[ALICE] = sorted(splits_x)
            self.splits_asc[BOB] = sorted(splits_y)
            ids_x = self._take(ALICE, gx1)
            ids_y = self._take(BOB, gy1)
            self.pending = (ids_x, ids_y)
            self.phase = "cross1"
            return
        if self.phase == "cross1":
            for side, wires in replies.items():
                coords = self._coord_map(side)
                for pid, coord in wires:
                    coords[pid] = coord
            self._finish_stage1()
            return
        kind, side = self.phase[0], self.phase[1]
        if kind == "group":
            ids = self._take(side, replies[side])
            self.trace.append(("fetch", "x" if side == ALICE else "y", self.f[side]))
            self.f[side] += 1
            other, needs = self._missing(ids, side)
            if needs:
                self.pending = (other, needs, side, ids)
                self.phase = ("cross", side)
            else:
                self._finish_step(side, ids)
            return
        if kind == "cross":
            other, _, fetched_side, ids = self.pending
            coords = self._coord_map(other)
            for pid, coord in replies[other]:
                coords[pid] = coord
            self.pending = None
            self._finish_step(fetched_side, ids)
            return
        if kind == "bulk":
            ids = self._take(side, replies[side])
            self.trace.append(("bulk", "x" if side == ALICE else "y", self.f[side], self.l[side] - 1))
            self.f[side] = self.l[side]
            other, needs = self._missing(ids, side)
            if needs:
                self.phase = ("bulkcross", other, needs)
            else:
                self.phase = "done"
            return
        if kind == "bulkcross":
            other = self.phase[1]
            coords = self._coord_map(other)
            for pid, coord in replies[other]:
                coords[pid] = coord
            self.phase = "done"
            return
        raise AssertionError(self.phase)

    def result(self) -> Skyline:
        both = self.xs.keys() & self.ys.keys()
        return skyline(Point(pid, self.xs[pid], self.ys[pid]) for pid in both)


def run_prune(
    instance: VerticalInstance,
    rho: int,
    r: int,
) -> tuple[Skyline, Transcript, CostReport]:
    coord = PruneCoordinator(instance.n, rho, r)
    sites = [
        ColumnStore(instance.alice, lambda e: e[1], lambda e: e[0], coord.size),
        ColumnStore(instance.bob, lambda e: e[0], lambda e: e[1], coord.size),
    ]
    return run_protocol(coord, sites, round_cap=10 * max(instance.n, 1))


class VerticalNaiveCoordinator:
    def __init__(self) -> None:
        self.xs: dict[int, float] = {}
        self.ys: dict[int, float] = {}
        self.done = False

    def requests(self):
        if self.done:
            return None
        return {ALICE: None, BOB: None}

    def receive(self, replies: dict[int, Any]) -> None:
        for x, pid in replies[ALICE]:
            self.xs[pid] = x
        for pid, y in replies[BOB]:
            self.ys[pid] = y
        self.done = True

    def recovered_count(self) -> int:
        return len(self.xs.keys() & self.ys.keys())

    def result(self) -> Skyline:
        return skyline(Point(pid, x, self.ys[pid]) for pid, x in self.xs.items())


class _FullColumn:
    def __init__(self, entries):
        self.entries = tuple(entries)

    def respond(self, payload: Any) -> Any:
        return self.entries


def run_vertical_naive(instance: VerticalInstance) -> tuple[Skyline, Transcript, CostReport]:
    """Both sides ship their whole column in one round; the coordinator joins."""
    coord = VerticalNaiveCoordinator()
    sites = [_FullColumn(instance.alice), _FullColumn(instance.bob)]
    return run_protocol(coord, sites, round_cap=10 * max(instance.n, 1))
