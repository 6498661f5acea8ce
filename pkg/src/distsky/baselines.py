"""Horizontal-partition comparison heuristics: AGiDS and FDS.

AGiDS: one charged setup exchange agrees on an equal-width grid over the
union bounding box, then sites report their occupied cells, the
coordinator prunes cells whose upper-right corner is dominated by another
occupied cell's lower-left corner, and the surviving cells' points are
shipped.

FDS: iterations of three rounds.  Sites volunteer their top-kappa local
points by score x + y, the coordinator broadcasts the minimum received
score and pulls everything above it, then feeds newly confirmed skyline
points back for local pruning.  ell is kept as a parameter for parity
with the usual presentation; at ell = 1 the feedback is simply the new
skyline points (a dominator count cannot be enforced without extra site
state, so larger ell does not change the filter).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable

from .core import Point, Skyline, covers, skyline
from .coordsim import CostReport, Transcript, run_protocol
from .horizontal import EMPTY, HorizontalInstance, ParameterError, _Window

__all__ = ["GridSpec", "run_agids", "run_fds"]

DONE = "done"


@dataclass(frozen=True)
class GridSpec:
    """Equal-width grid over a bounding box; g cells per axis."""

    g: int
    x_min: float
    x_max: float
    y_min: float
    y_max: float

    def cell(self, p: Point) -> tuple[int, int]:
        ix = int((p.x - self.x_min) / (self.x_max - self.x_min) * self.g)
        iy = int((p.y - self.y_min) / (self.y_max - self.y_min) * self.g)
        return min(max(ix, 0), self.g - 1), min(max(iy, 0), self.g - 1)

    def flat(self, p: Point) -> int:
        ix, iy = self.cell(p)
        return ix * self.g + iy


def _grid_from_boxes(g: int, boxes: Iterable[tuple[float, float, float, float]]) -> GridSpec:
    xs_lo, xs_hi, ys_lo, ys_hi = zip(*boxes)
    x_min, x_max = min(xs_lo), max(xs_hi)
    y_min, y_max = min(ys_lo), max(ys_hi)
    pad = 2.0**-30
    if x_max <= x_min:
        x_max = x_min + max(abs(x_min), 1.0) * pad
    if y_max <= y_min:
        y_max = y_min + max(abs(y_min), 1.0) * pad
    return GridSpec(g, x_min, x_max, y_min, y_max)


class AgidsSite:
    def __init__(self, points: Iterable[Point]):
        self.window = _Window(points)
        self.grid: GridSpec | None = None
        self.phase = "bbox"

    def respond(self, payload: Any) -> Any:
        if self.phase == "bbox":
            self.phase = "cells"
            if not len(self.window):
                return EMPTY
            xs = [p.x for p in self.window.points]
            ys = [p.y for p in self.window.points]
            return (min(xs), max(xs), min(ys), max(ys))
        if self.phase == "cells":
            self.phase = "points"
            g, x_min, x_max, y_min, y_max = payload
            self.grid = GridSpec(g, x_min, x_max, y_min, y_max)
            return tuple(sorted({self.grid.flat(p) for p in self.window.points}))
        surviving = set(payload)
        return tuple(p for p in self.window.points if self.grid.flat(p) in surviving)


class AgidsCoordinator:
    def __init__(self, s: int, g: int):
        if g < 1:
            raise ParameterError("grid must have at least one cell per axis")
        self.s = s
        self.g = g
        self.phase = "bbox"
        self.active: set[int] = set(range(s))
        self.grid: GridSpec | None = None
        self.occupied: set[int] = set()
        self.survivors: tuple[int, ...] = ()
        self.received: list[Point] = []
        self.done = False

    def requests(self):
        if self.done or not self.active:
            return None
        if self.phase == "bbox":
            return {i: None for i in sorted(self.active)}
        if self.phase == "cells":
            grid = self.grid
            return {i: (grid.g, grid.x_min, grid.x_max, grid.y_min, grid.y_max) for i in sorted(self.active)}
        return {i: self.survivors for i in sorted(self.active)}

    def receive(self, replies: dict[int, Any]) -> None:
        if self.phase == "bbox":
            boxes = []
            for site, reply in replies.items():
                if reply == EMPTY:
                    self.active.discard(site)
                else:
                    boxes.append(reply)
            if not boxes:
                self.done = True
                return
            self.grid = _grid_from_boxes(self.g, boxes)
            self.phase = "cells"
            return
        if self.phase == "cells":
            for cells in replies.values():
                self.occupied.update(cells)
            self.survivors = tuple(sorted(self._surviving_cells()))
            self.phase = "points"
            return
        for pts in replies.values():
            self.received.extend(pts)
        self.done = True

    def _surviving_cells(self) -> set[int]:
        """Drop cell c when some occupied cell exceeds it strictly on both
        axes: that cell holds a real point dominating all of c."""
        cells = [(c // self.g, c % self.g) for c in self.occupied]
        out = set()
        for cx, cy in cells:
            pruned = any(ox > cx and oy > cy for ox, oy in cells)
            if not pruned:
                out.add(cx * self.g + cy)
        return out

    def result(self) -> Skyline:
        return skyline(self.received)


def run_agids(
    instance: HorizontalInstance,
    cells_per_axis: int = 20,
) -> tuple[Skyline, Transcript, CostReport]:
    sites = [AgidsSite(pts) for pts in instance.sites]
    coord = AgidsCoordinator(instance.s, cells_per_axis)
    return run_protocol(coord, sites, round_cap=10 * max(instance.n, 1))


def _score(p: Point) -> float:
    return p.x + p.y


class FdsSite:
    """Keeps the unsent, unpruned part of its local skyline sorted by score."""

    def __init__(self, points: Iterable[Point], kappa: int):
        window = _Window(points)
        self.pending = sorted(window.points, key=_score, reverse=True)
        self.kappa = kappa
        self.phase = "volunteer"

    def _drop_covered(self, confirmed: Iterable[Point]) -> None:
        confirmed = list(confirmed)
        if confirmed:
            self.pending = [
                p for p in self.pending if not any(covers(c, p) for c in confirmed)
            ]

    def respond(self, payload: Any) -> Any:
        if self.phase == "volunteer":
            if not self.pending:
                return DONE
            self.phase = "flush"
            batch = self.pending[: self.kappa]
            self.pending = self.pending[self.kappa :]
            return tuple(batch)
        if self.phase == "flush":
            self.phase = "feedback"
            f_min = payload
            out = [p for p in self.pending if _score(p) > f_min]
            self.pending = [p for p in self.pending if _score(p) <= f_min]
            return tuple(out)
        self.phase = "volunteer"
        self._drop_covered(payload)
        return ()


class FdsCoordinator:
    def __init__(self, s: int, kappa: int, ell: int):
        if kappa < 1 or ell < 1:
            raise ParameterError("fds needs kappa >= 1 and ell >= 1")
        self.s = s
        self.phase = "volunteer"
        self.active: set[int] = set(range(s))
        self.received: list[Point] = []
        self.sky_ids: set[int] = set()
        self.delta: tuple[Point, ...] = ()
        self.f_min = 0.0
        self.done = False

    def requests(self):
        if self.done or not self.active:
            return None
        if self.phase == "volunteer":
            return {i: None for i in sorted(self.active)}
        if self.phase == "flush":
            return {i: self.f_min for i in sorted(self.active)}
        return {i: self.delta for i in sorted(self.active)}

    def receive(self, replies: dict[int, Any]) -> None:
        if self.phase == "volunteer":
            batch: list[Point] = []
            for site, reply in replies.items():
                if reply == DONE:
                    self.active.discard(site)
                else:
                    batch.extend(reply)
            if not batch:
                self.done = True
                return
            self.f_min = min(_score(p) for p in batch)
            self.received.extend(batch)
            self.phase = "flush"
            return
        if self.phase == "flush":
            for pts in replies.values():
                self.received.extend(pts)
            sky = skyline(self.received)
            new = tuple(p for p in sky if p.id not in self.sky_ids)
            self.sky_ids = set(sky.ids())
            self.delta = new
            self.phase = "feedback"
            return
        self.phase = "volunteer"

    def result(self) -> Skyline:
        return skyline(self.received)


def run_fds(
    instance: HorizontalInstance,
    kappa: int = 1,
    ell: int = 1,
) -> tuple[Skyline, Transcript, CostReport]:
    if kappa < 1 or ell < 1:
        raise ParameterError("fds needs kappa >= 1 and ell >= 1")
    sites = [FdsSite(pts, kappa) for pts in instance.sites]
    coord = FdsCoordinator(instance.s, kappa, ell)
    return run_protocol(coord, sites, round_cap=10 * max(instance.n, 1))
