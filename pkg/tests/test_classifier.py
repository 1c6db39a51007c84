from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from rom_mis.classifier import (ClassId, ClassParams, ceil_log2, class_contains, class_lower_sides,
                                hyperrect_class, interval_class)
from rom_mis.errors import OutOfRange
from rom_mis.geometry import HyperRect, coord


def box(*sides):
    return HyperRect([0] * len(sides), list(sides))


def test_interval_class_examples():
    p = ClassParams(16)
    assert interval_class(Fraction(1, 2), p) == 0
    assert interval_class(Fraction(3, 2), p) == 1
    assert interval_class(16, p) == p.k == 4
    assert interval_class(1, p) == 0
    assert interval_class(0, p) == 0
    with pytest.raises(OutOfRange):
        interval_class(17, p)


def test_k_for_non_power_of_two():
    p = ClassParams(100)
    assert p.k == 7
    assert interval_class(100, p) == 7
    assert ClassParams(1).k == 1
    assert ClassParams(2).k == 1


def test_hyperrect_class_examples():
    p = ClassParams(16, d=2)
    assert hyperrect_class(box("1/2", 5), p) == ClassId.thin(1)
    assert hyperrect_class(box(5, "1/2"), p) == ClassId.thin(2)
    assert hyperrect_class(box("3/2", 3), p) == ClassId.similar((1, 2))
    assert str(ClassId.similar((1, 2))) == "Y(1,2)"


def test_over_size_side_raises_even_when_thin():
    p = ClassParams(16, d=2)
    with pytest.raises(OutOfRange):
        hyperrect_class(box("1/2", 40), p)


def _brute_class(length, k):
    # enumerate the ranges [0,1], (1,2], (2,4], ...
    if 0 <= length <= 1:
        return 0
    for i in range(1, k + 1):
        if 2 ** (i - 1) < length <= 2 ** i:
            return i
    return None


lengths = st.fractions(min_value=0, max_value=1024, max_denominator=64).map(coord)


@given(lengths)
def test_interval_class_matches_range_enumeration(length):
    p = ClassParams(1024)
    assert interval_class(length, p) == _brute_class(length, p.k)


@given(st.lists(lengths, min_size=1, max_size=3))
def test_classes_partition_boxes(sides):
    p = ClassParams(1024, d=len(sides))
    h = box(*sides)
    cid = hyperrect_class(h, p)
    assert class_contains(cid, h, p)
    if cid.kind == "X":
        x = cid.index[0]
        assert sides[x - 1] <= 1
        assert all(s > 1 for s in sides[:x - 1])
    else:
        assert all(1 <= y <= p.k for y in cid.index)
        for s, l in zip(sides, class_lower_sides(cid)):
            assert l < s <= 2 * l


@given(st.integers(min_value=1, max_value=2 ** 80))
def test_ceil_log2_int(x):
    i = ceil_log2(x)
    assert 2 ** i >= x
    assert i == 0 or 2 ** (i - 1) < x


def test_class_count():
    p = ClassParams(16, d=2)
    assert p.n_classes == 2 + 16
    assert p.n_classes <= (p.k + 1) ** 2
