import itertools
from pathlib import Path

import pytest

from distsky.core import Point, dominates, skyline, skyline_bruteforce
from distsky.datagen import (
    GenSpec,
    expand_bits,
    gen_one_round_hard,
    gen_staircase,
    gen_synthetic,
    gen_vertical_disj,
    ingest_csv,
    partition,
)
from distsky.horizontal import ParameterError
from distsky.vertical import join_instance

FIXTURES = Path(__file__).parent / "fixtures"


def test_generators_are_deterministic():
    a = gen_synthetic(GenSpec("indi", 10, seed=7))
    b = gen_synthetic(GenSpec("indi", 10, seed=7))
    assert a == b
    c = gen_synthetic(GenSpec("anti", 100, seed=7))
    d = gen_synthetic(GenSpec("anti", 100, seed=7))
    assert c == d


def test_generated_coordinates_are_distinct():
    for kind in ("indi", "corr", "anti"):
        pts = gen_synthetic(GenSpec(kind, 5000, seed=3))
        assert len({(p.x, p.y) for p in pts}) == 5000


def test_invalid_spec_rejected():
    with pytest.raises(ParameterError):
        gen_synthetic(GenSpec("corr", 100, lines=7, per_line=7, seed=0))
    with pytest.raises(ParameterError):
        gen_synthetic(GenSpec("nope", 10, seed=0))
    with pytest.raises(ParameterError):
        gen_synthetic(GenSpec("indi", 0, seed=0))


def test_skyline_size_orderings_at_scale():
    # frozen measurement: corr collapses to a handful of points, anti stays
    # the widest of the three
    ks = {
        kind: len(skyline(gen_synthetic(GenSpec(kind, 100_000, seed=2))))
        for kind in ("indi", "corr", "anti")
    }
    assert ks["corr"] * 3 < ks["anti"]
    assert ks["anti"] > ks["indi"]


def test_expand_bits_doubles_each_bit():
    assert expand_bits([1, 0, 1, 0, 1]) == [1, 0, 0, 1, 1, 0, 0, 1, 1, 0]


def test_staircase_corner_set_for_alternating_vector():
    pts = gen_staircase([1, 0, 1, 0, 1])
    coords = sorted((p.x, p.y) for p in pts)
    assert coords == [(0.0, 5.0), (2.0, 4.0), (4.0, 2.0), (5.0, 0.0)]


def test_staircase_all_zeros_walked_by_hand():
    # X' = 0101: right-down-right-down from (0, 2): corners (1,2) and (2,1)
    pts = gen_staircase([0, 0])
    assert sorted((p.x, p.y) for p in pts) == [(1.0, 2.0), (2.0, 1.0)]


def test_staircase_is_an_antichain():
    import random

    rng = random.Random(11)
    for _ in range(60):
        m = rng.randint(1, 12)
        bits = [rng.randint(0, 1) for _ in range(m)]
        pts = gen_staircase(bits)
        for u in pts:
            for v in pts:
                if u is not v:
                    assert not dominates(u, v), (bits, u, v)


def canonical_corners(m):
    return {(float(j), float(m - j + 1)) for j in range(1, m + 1)}


def test_staircase_union_reveals_disjointness():
    # the union skyline equals the canonical staircase exactly when no
    # column is all-ones across the vectors
    for m in range(1, 7):
        for bits1 in itertools.product([0, 1], repeat=m):
            for bits2 in itertools.product([0, 1], repeat=m):
                pts = gen_staircase(bits1) + gen_staircase(list(bits2), start_id=100)
                pts = list({(p.x, p.y): p for p in pts}.values())
                sky = {(p.x, p.y) for p in skyline_bruteforce(pts)}
                disj = any(a and b for a, b in zip(bits1, bits2))
                assert (sky != canonical_corners(m)) == disj, (bits1, bits2)


def test_one_round_hard_corner_cases():
    bits = [1, 0, 0, 1, 1]
    high = gen_one_round_hard(bits, 1)
    sky = skyline_bruteforce(high.union())
    assert len(sky) == 1
    (corner,) = list(sky)
    assert (corner.x, corner.y) == (5.0, 5.0)

    low = gen_one_round_hard(bits, 0)
    sky = skyline_bruteforce(low.union())
    assert sky.ids() == {p.id for p in low.sites[0]}


def test_one_round_hard_skyline_count_formula():
    # corner count: zeros + adjacent one-pairs + one bit at each boundary;
    # frozen after brute-force checks on every vector up to m = 10
    for m in range(1, 11):
        for bits in itertools.product([0, 1], repeat=m):
            inst = gen_one_round_hard(list(bits), 0)
            expect = (
                sum(1 for b in bits if b == 0)
                + sum(1 for a, b in zip(bits, bits[1:]) if a and b)
                + bits[0]
                + bits[-1]
            )
            assert len(skyline_bruteforce(inst.union())) == expect


def test_vertical_disj_examples():
    inst = gen_vertical_disj({2}, {2}, 3)
    pts = join_instance(inst)
    sky = skyline_bruteforce(pts)
    assert len(sky) == 1
    (top,) = list(sky)
    assert top.id == 2 and (top.x, top.y) == (2.0, 2.0)

    empty = gen_vertical_disj(set(), set(), 5)
    sky = skyline_bruteforce(join_instance(empty))
    assert len(sky) == 1  # the one exact (1, 1) point survives its perturbed twins


def test_vertical_disj_dichotomy_exhaustive_small():
    for n in range(1, 9):
        ids = range(1, n + 1)
        for a_mask in range(2**n):
            a = {i for i in ids if a_mask >> (i - 1) & 1}
            if not a:
                continue
            for b_mask in range(2**n):
                b = {i for i in ids if b_mask >> (i - 1) & 1}
                if not b:
                    continue
                sky = skyline_bruteforce(join_instance(gen_vertical_disj(a, b, n)))
                assert (len(sky) == 1) == bool(a & b), (n, a, b)


def test_vertical_disj_category_structures_to_n12():
    # larger n: every split of ids into the four coordinate classes, under
    # several id orderings
    import random

    rng = random.Random(123)
    for n in (9, 12):
        for n11 in range(0, n + 1):
            for n21 in range(0, n - n11 + 1):
                for n12 in range(0, n - n11 - n21 + 1):
                    n22 = n - n11 - n21 - n12
                    if (n21 + n22 == 0) or (n12 + n22 == 0):
                        continue  # one side empty: covered by the small sweep
                    for shuffle in range(2):
                        ids = list(range(1, n + 1))
                        if shuffle:
                            rng.shuffle(ids)
                        a = set(ids[n11 : n11 + n21]) | set(ids[n11 + n21 + n12 :])
                        b = set(ids[n11 + n21 : n11 + n21 + n12]) | set(ids[n11 + n21 + n12 :])
                        sky = skyline_bruteforce(join_instance(gen_vertical_disj(a, b, n)))
                        assert (len(sky) == 1) == (n22 > 0)


def test_partition_single_site():
    pts = gen_synthetic(GenSpec("indi", 30, seed=1))
    inst = partition(pts, "random", 1, seed=0)
    assert inst.s == 1 and inst.n == 30


def test_partition_sorted_invariant():
    pts = gen_synthetic(GenSpec("corr", 500, seed=5))
    inst = partition(pts, "sorted", 7, seed=0)
    assert inst.partition_kind == "sorted"
    prev = float("-inf")
    for site in inst.sites:
        if not site:
            continue
        xs = [p.x for p in site]
        assert min(xs) > prev or min(xs) == prev == float("-inf")
        prev = max(xs)


def test_partition_sorted_keeps_equal_x_together():
    pts = [Point(i, float(i // 4), float(i)) for i in range(32)]
    inst = partition(pts, "sorted", 5, seed=0)
    seen = {}
    for idx, site in enumerate(inst.sites):
        for p in site:
            seen.setdefault(p.x, set()).add(idx)
    for x, sites in seen.items():
        assert len(sites) == 1, f"x={x} straddles sites {sites}"


def test_partition_deterministic_and_complete():
    pts = gen_synthetic(GenSpec("indi", 200, seed=9))
    a = partition(pts, "random", 6, seed=42)
    b = partition(pts, "random", 6, seed=42)
    assert a.sites == b.sites
    assert sorted(p.id for p in a.union()) == list(range(200))
    c = partition(pts, "by-key", 6)
    assert sorted(p.id for p in c.union()) == list(range(200))


def test_ingest_csv_dedupe(tmp_path):
    f = tmp_path / "dup.csv"
    f.write_text("a,b\n1,2\n1,2\n3,4\n")
    pts = ingest_csv(f, "a", "b", dedupe=True)
    assert len(pts) == 2
    assert pts[0].id == 0 and (pts[0].x, pts[0].y) == (1.0, 2.0)


def test_ingest_csv_negation_flips_skyline(tmp_path):
    f = tmp_path / "neg.csv"
    f.write_text("x,y\n1,5\n2,4\n3,3\n")
    plain = ingest_csv(f, "x", "y")
    flipped = ingest_csv(f, "x", "y", negate_x=True)
    assert {(p.x, p.y) for p in flipped} == {(-p.x, p.y) for p in plain}
    sky = skyline_bruteforce(flipped)
    assert sky.ids() == {0}  # smallest x preferred once negated


def test_ingest_csv_skips_bad_rows_and_errors_when_empty(tmp_path):
    f = tmp_path / "messy.csv"
    f.write_text("x,y\n1,2\noops,3\n4,5\n")
    pts = ingest_csv(f, "x", "y")
    assert len(pts) == 2
    g = tmp_path / "empty.csv"
    g.write_text("x,y\nbad,bad\n")
    with pytest.raises(ParameterError):
        ingest_csv(g, "x", "y")
    with pytest.raises(ParameterError):
        ingest_csv(f, "x", "missing")


def test_ingest_covertype_fixture():
    pts = ingest_csv(FIXTURES / "covertype_sample.csv", "Elevation", "Slope")
    assert len(pts) == 20
    sky = skyline_bruteforce(pts)
    assert len(sky) >= 1
    assert any(p.x == 2989.0 for p in sky)
