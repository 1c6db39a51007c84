import numpy as np
import pytest
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from rom_mis.classifier import ClassId
from rom_mis.errors import ClassMismatch, InvariantViolation
from rom_mis.geometry import HyperRect, coord, intersects
from rom_mis.structures import (GridChecker, IntervalChecker, NaiveChecker, ThinChecker,
                                checker_for_class, make_checker)


def rq(rng, lo, hi, den=8):
    return coord(mpq(int(rng.integers(int(lo * den), int(hi * den) + 1)), den))


def random_thin(rng, d, axis, extent):
    lo, hi = [], []
    for j in range(d):
        a = rq(rng, 0, extent)
        side = rq(rng, 0, 1) if j == axis - 1 else rq(rng, 0, 6)
        lo.append(a)
        hi.append(a + side)
    return HyperRect.raw(tuple(lo), tuple(hi))


def random_similar(rng, ls, extent):
    lo, hi = [], []
    for l in ls:
        a = rq(rng, 0, extent)
        side = l + rq(rng, mpq(1, 8), l)
        lo.append(a)
        hi.append(coord(a + side))
    return HyperRect.raw(tuple(lo), tuple(hi))


def decisions(checker, seq):
    return [checker.independence_update(h) for h in seq]


def test_empty_checker_accepts():
    assert NaiveChecker(2).independence_update(HyperRect([0, 0], [9, 9]))
    assert ThinChecker(2, 1).independence_update(HyperRect([0, 0], ["1/2", 7]))
    assert GridChecker((1, 1)).independence_update(HyperRect([0, 0], ["3/2", "3/2"]))
    assert IntervalChecker().independence_update(HyperRect.interval(3, 30))


def test_grid_rejects_identical_square():
    g = GridChecker.for_class(ClassId.similar((2, 2)))
    h = HyperRect([5, 5], [8, 8])
    assert g.independence_update(h)
    assert not g.independence_update(h)


def test_grid_candidates_on_2x2_cells():
    # side-3/2 boxes each cover a 2 x 2 block of unit cells
    g = GridChecker((1, 1))
    for x, y in [(0, 0), (3, 0), (0, 3), (3, 3)]:
        assert g.independence_update(HyperRect([x, y], [x + mpq(3, 2), y + mpq(3, 2)]))
    h = HyperRect(["1/2", "1/2"], [2, 2])
    assert g.enumerate_candidates(h) == [g.accepted[0]]
    h = HyperRect(["3/2", "3/2"], [3, 3])
    assert len(g.enumerate_candidates(h)) == 4


def test_candidates_for_far_query_are_empty():
    t = ThinChecker(2, 1)
    t.independence_update(HyperRect([0, 0], [1, 5]))
    assert t.enumerate_candidates(HyperRect([100, 0], [100, 5])) == []
    g = GridChecker((1, 1))
    g.independence_update(HyperRect([0, 0], [2, 2]))
    assert g.enumerate_candidates(HyperRect([50, 50], [52, 52])) == []
    i = IntervalChecker()
    i.independence_update(HyperRect.interval(0, 1))
    assert i.enumerate_candidates(HyperRect.interval(-5, -4)) == []


def test_class_mismatch():
    with pytest.raises(ClassMismatch):
        ThinChecker(2, 1).independence_update(HyperRect([0, 0], [2, 1]))
    with pytest.raises(ClassMismatch):
        GridChecker((2, 2)).independence_update(HyperRect([0, 0], [1, 3]))


def test_grid_cap_assertion_fires_on_out_of_class_cells():
    g = GridChecker((1,))
    g.cell_cap = 1
    g.independence_update(HyperRect.interval("1/4", "3/2"))
    with pytest.raises(InvariantViolation):
        g.independence_update(HyperRect.interval("7/4", "3"))


def test_make_checker_kinds():
    assert isinstance(make_checker("naive", 2), NaiveChecker)
    assert isinstance(make_checker("interval", 1), IntervalChecker)
    assert isinstance(make_checker("range_tree", 2, ClassId.thin(2)), ThinChecker)
    assert isinstance(make_checker("grid", 2, ClassId.similar((1, 3))), GridChecker)
    assert isinstance(checker_for_class(ClassId.interval(3), 1), IntervalChecker)
    with pytest.raises(ValueError):
        make_checker("bogus", 1)


@pytest.mark.parametrize("seed", range(5))
def test_interval_checker_matches_naive(seed):
    rng = np.random.default_rng(seed)
    seq = []
    for _ in range(2000):
        a = rq(rng, 0, 500)
        seq.append(HyperRect.raw((a,), (a + rq(rng, 0, 20),)))
    assert decisions(IntervalChecker(), seq) == decisions(NaiveChecker(1), seq)


@pytest.mark.parametrize("d,axis", [(1, 1), (2, 1), (2, 2), (3, 2)])
def test_thin_checker_matches_naive(d, axis):
    rng = np.random.default_rng(10 * d + axis)
    seq = [random_thin(rng, d, axis, 40) for _ in range(1500)]
    assert decisions(ThinChecker(d, axis), seq) == decisions(NaiveChecker(d), seq)


@pytest.mark.parametrize("ls", [(1,), (1, 2), (4, 1), (2, 2, 1)])
def test_grid_checker_matches_naive(ls):
    rng = np.random.default_rng(len(ls))
    seq = [random_similar(rng, ls, 60) for _ in range(1500)]
    g = GridChecker(ls)
    assert decisions(g, seq) == decisions(NaiveChecker(len(ls)), seq)
    assert g.max_cell_load <= 5 ** len(ls)
    assert g.max_cells_per_box <= 3 ** len(ls)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 64), st.integers(0, 8)), max_size=40))
def test_interval_checker_property(pairs):
    seq = [HyperRect.raw((mpq(a, 4),), (mpq(a + b, 4),)) for a, b in pairs]
    assert decisions(IntervalChecker(), seq) == decisions(NaiveChecker(1), seq)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 32), st.integers(0, 4), st.integers(0, 32), st.integers(0, 40)),
                max_size=40))
def test_thin_checker_property(rows):
    seq = [HyperRect.raw((mpq(a, 4), mpq(c, 4)), (mpq(a + b, 4), mpq(c + e, 4))) for a, b, c, e in rows]
    accepted = [h for h, ok in zip(seq, decisions(ThinChecker(2, 1), seq)) if ok]
    assert accepted == [h for h, ok in zip(seq, decisions(NaiveChecker(2), seq)) if ok]
    for i, a in enumerate(accepted):
        for b in accepted[i + 1:]:
            assert not intersects(a, b)
