import random

import pytest

from distsky.core import Point, dominates, skyline_bruteforce
from distsky.coordsim import run_protocol
from distsky.datagen import GenSpec, gen_synthetic, gen_vertical_disj
from distsky.horizontal import ParameterError
from distsky.vertical import (
    ALICE,
    BOB,
    ColumnStore,
    PruneCoordinator,
    join_instance,
    run_prune,
    run_vertical_naive,
    vertical_split,
)


def P(i, x, y):
    return Point(i, float(x), float(y))


def run_traced(instance, rho, r):
    coord = PruneCoordinator(instance.n, rho, r)
    stores = [
        ColumnStore(instance.alice, lambda e: e[1], lambda e: e[0], coord.size),
        ColumnStore(instance.bob, lambda e: e[0], lambda e: e[1], coord.size),
    ]
    sky, transcript, report = run_protocol(coord, stores, round_cap=10 * max(instance.n, 1))
    return coord, sky, transcript, report


def test_prune_four_point_hand_example():
    pts = [P(1, 10, 10), P(2, 9, 1), P(3, 1, 9), P(4, 2, 2)]
    inst = vertical_split(pts)
    coord, sky, transcript, report = run_traced(inst, 2, 8)
    assert sky.ids() == {1}
    assert report.rounds == 2
    # a, b, c recovered in stage 1; d never leaves the sites
    assert report.recovered_points == 3
    assert 4 not in (coord.xs.keys() & coord.ys.keys())
    assert coord.l == {ALICE: 2, BOB: 2}
    assert coord.f == {ALICE: 2, BOB: 2}


def test_prune_single_point():
    inst = vertical_split([P(1, 0.3, 0.7)])
    _, sky, _, report = run_traced(inst, 1, 8)
    assert sky.ids() == {1}
    assert report.recovered_points == 1


def _walkthrough_instance():
    """64 points frozen as a regression fixture for the fetch schedule:
    stage 1 leaves l_x=8, l_y=7; the next two steps fetch the second and
    third y-groups, bringing l_x to 7 then 4; stage 3 bulk-fetches x-groups
    2..3."""
    xbase = {1: 49, 2: 41, 3: 17, 4: 57, 5: 25, 6: 1, 7: 9, 8: 33}
    pts = []
    for ry in range(1, 65):
        m = (ry - 1) // 8 + 1
        rx = xbase[m] + (ry - 1) % 8
        pts.append(P(ry, 65 - rx, 65 - ry))
    return vertical_split(pts)


def test_prune_walkthrough_trace():
    inst = _walkthrough_instance()
    coord, sky, _, report = run_traced(inst, 8, 8)
    assert report.rounds == 8
    assert coord.trace[0] == ("stage1", 8, 7)
    assert coord.trace[1] == ("fetch", "y", 2)
    assert coord.trace[2] == ("l", 7, 7)
    assert coord.trace[3] == ("fetch", "y", 3)
    assert coord.trace[4] == ("l", 4, 7)
    assert coord.trace[5] == ("bulk", "x", 2, 3)
    assert sky.ids() == skyline_bruteforce(join_instance(inst)).ids()


def test_prune_rejects_small_budget():
    inst = vertical_split([P(1, 0, 0)])
    with pytest.raises(ParameterError):
        run_prune(inst, 1, 5)
    with pytest.raises(ParameterError):
        run_prune(inst, 0, 8)


@pytest.mark.parametrize("rho", [1, 2, 8, 32])
@pytest.mark.parametrize("r", [6, 8, 12])
def test_prune_oracle_and_budget_randomized(rho, r):
    rng = random.Random(1000 * rho + r)
    for trial in range(4):
        kind = rng.choice(["indi", "corr", "anti"])
        n = rng.randint(1, 1200)
        pts = gen_synthetic(GenSpec(kind, n, lines=n, per_line=1, seed=trial))
        inst = vertical_split(pts)
        coord, sky, _, report = run_traced(inst, rho, r)
        assert sky.ids() == skyline_bruteforce(pts).ids()
        assert report.rounds <= r
        assert report.recovered_points <= n
        # unrecovered points past a prune line are covered by a recovered one
        recovered = [P(pid, coord.xs[pid], coord.ys[pid]) for pid in coord.xs.keys() & coord.ys.keys()]
        for store, side in ((inst.alice, ALICE), (inst.bob, BOB)):
            line = coord.l[side]
            for rank, entry in enumerate(store):
                group = rank // coord.size + 1
                pid = entry[1] if side == ALICE else entry[0]
                if group >= line and pid not in {q.id for q in recovered}:
                    point = next(p for p in pts if p.id == pid)
                    assert any(dominates(q, point) for q in recovered)


def test_prune_progress_is_monotone():
    events = []

    class TracingCoordinator(PruneCoordinator):
        def _advance(self):
            events.append((dict(self.f), dict(self.l)))
            super()._advance()

    pts = gen_synthetic(GenSpec("anti", 600, seed=9))
    inst = vertical_split(pts)
    coord = TracingCoordinator(inst.n, 16, 12)
    stores = [
        ColumnStore(inst.alice, lambda e: e[1], lambda e: e[0], coord.size),
        ColumnStore(inst.bob, lambda e: e[0], lambda e: e[1], coord.size),
    ]
    sky, _, _ = run_protocol(coord, stores, round_cap=10_000)
    assert sky.ids() == skyline_bruteforce(pts).ids()
    for (f0, l0), (f1, l1) in zip(events, events[1:]):
        for side in (ALICE, BOB):
            assert f1[side] >= f0[side]
            assert l1[side] <= l0[side]


def test_prune_gap_scheduling_prefers_smaller_gap_with_alice_ties():
    inst = _walkthrough_instance()
    coord, _, _, _ = run_traced(inst, 8, 8)
    # both fetches went to Bob while its gap was strictly smaller
    assert [t[1] for t in coord.trace if t[0] == "fetch"] == ["y", "y"]
    tie = vertical_split([P(i, i, 10 - i) for i in range(1, 5)])
    coord2, _, _, _ = run_traced(tie, 4, 8)
    fetches = [t for t in coord2.trace if t[0] == "fetch"]
    if fetches:
        assert fetches[0][1] == "x"


def test_vertical_naive_words_and_recovery():
    pts = gen_synthetic(GenSpec("indi", 300, seed=4))
    inst = vertical_split(pts)
    sky, _, report = run_vertical_naive(inst)
    assert sky.ids() == skyline_bruteforce(pts).ids()
    assert report.total_words == 4 * 300
    assert report.rounds == 1
    assert report.recovered_points == 300


def test_vertical_naive_on_disjointness_instances():
    intersecting = gen_vertical_disj({2, 5}, {5, 7}, 9)
    sky, _, _ = run_vertical_naive(intersecting)
    assert len(sky) == 1
    (only,) = list(sky)
    assert only.x == 2.0 and only.y == 2.0

    disjoint = gen_vertical_disj({1, 2}, {3, 4}, 6)
    sky, _, _ = run_vertical_naive(disjoint)
    assert len(sky) == 2
    coords = sorted((p.x, p.y) for p in sky)
    assert coords[0] == (1.0, 2.0)
    assert coords[1] == (2.0, 1.0)


def test_prune_skyline_ids_travelled_up():
    pts = gen_synthetic(GenSpec("corr", 500, seed=12))
    inst = vertical_split(pts)
    _, sky, transcript, _ = run_traced(inst, 8, 8)

    def ids_in(payload, out):
        if isinstance(payload, tuple):
            if len(payload) == 2 and isinstance(payload[0], (int, float)) and isinstance(payload[1], (int, float)):
                out.add(payload[0] if isinstance(payload[0], int) else payload[1])
            else:
                for item in payload:
                    ids_in(item, out)

    shipped: set[int] = set()
    for m in transcript.messages:
        if m.direction == "up":
            ids_in(m.payload, shipped)
    assert sky.ids() <= shipped
