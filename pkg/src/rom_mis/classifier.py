"""Size classes with epsilon fixed to 1.

Interval class 0 holds lengths in [0, 1]; class i >= 1 holds lengths in
(2^(i-1), 2^i].  A box is *thin* along axis x (class ``X(x)``) when x is the
smallest axis with side length <= 1; otherwise every side exceeds 1 and the
box is *similar-size* class ``Y(y)`` with ``y_j`` the interval class of side j.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import OutOfRange
from .geometry import Coordinate, HyperRect, coord


def ceil_log2(x) -> int:
    """Smallest integer i >= 0 with 2^i >= x (0 for x <= 1); exact."""
    if x <= 1:
        return 0
    if isinstance(x, int):
        return (x - 1).bit_length()
    num, den = x.numerator, x.denominator
    i = num.bit_length() - den.bit_length()
    while (den << i) < num:
        i += 1
    while i > 0 and (den << (i - 1)) >= num:
        i -= 1
    return i


@dataclass(frozen=True)
class ClassParams:
    """``k = ceil(log2 K)``, floored at 1 so that the index set [k] is never empty."""

    K: Coordinate
    d: int = 1
    epsilon: int = 1
    k: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "K", coord(self.K))
        if self.K <= 0:
            raise ValueError("K must be positive")
        if self.epsilon != 1:
            raise ValueError("only epsilon = 1 is supported")
        object.__setattr__(self, "k", max(1, ceil_log2(self.K)))

    @property
    def n_classes(self) -> int:
        """d + k^d thin plus similar-size classes (k + 1 for intervals)."""
        if self.d == 1:
            return self.k + 1
        return self.d + self.k ** self.d


class ClassId(NamedTuple):
    """``kind`` is 'I' (interval class), 'X' (thin) or 'Y' (similar size)."""

    kind: str
    index: tuple

    @classmethod
    def interval(cls, i: int) -> "ClassId":
        return cls("I", (i,))

    @classmethod
    def thin(cls, x: int) -> "ClassId":
        return cls("X", (x,))

    @classmethod
    def similar(cls, y) -> "ClassId":
        return cls("Y", tuple(y))

    def __str__(self) -> str:
        if self.kind == "I":
            return f"S{self.index[0]}"
        if self.kind == "X":
            return f"X{self.index[0]}"
        return "Y(" + ",".join(map(str, self.index)) + ")"


def interval_class(length, params: ClassParams) -> int:
    if length < 0:
        raise ValueError(f"negative length {length}")
    i = ceil_log2(length)
    if i > params.k:
        raise OutOfRange(f"length {length} exceeds 2^k = {2 ** params.k}")
    return i


def hyperrect_class(h: HyperRect, params: ClassParams) -> ClassId:
    lo, hi = h
    y = tuple(interval_class(b - a, params) for a, b in zip(lo, hi))
    for j, c in enumerate(y):
        if c == 0:
            return ClassId("X", (j + 1,))
    return ClassId("Y", y)


def class_lower_sides(cid: ClassId) -> tuple:
    """For Y(y): per-axis lower side bounds 2^(y_j - 1) (sides lie in (l, 2l])."""
    if cid.kind != "Y":
        raise ValueError("only similar-size classes have side bounds on every axis")
    return tuple(2 ** (y - 1) for y in cid.index)


def class_contains(cid: ClassId, h: HyperRect, params: ClassParams) -> bool:
    if cid.kind == "I":
        return interval_class(h[1][0] - h[0][0], params) == cid.index[0]
    return hyperrect_class(h, params) == cid
