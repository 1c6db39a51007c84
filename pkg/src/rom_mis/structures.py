"""Independence checkers: decide whether a new box meets any accepted box.

Every checker answers exactly like :class:`NaiveChecker`; the others only
narrow down the candidates that get the exact intersection test.

* :class:`IntervalChecker` -- d = 1, any lengths.  Accepted intervals are
  disjoint, so sorted by left endpoint they are also sorted by right endpoint
  and the predecessor of a query is its only possible conflict.
* :class:`ThinChecker` -- boxes with side <= 1 along a fixed axis, indexed by
  their starting point on that axis.
* :class:`GridChecker` -- boxes whose sides lie in (l_j, 2 l_j], hashed into a
  grid of cells of side l_j anchored at 0.
"""
from __future__ import annotations

from typing import Optional

from sortedcontainers import SortedKeyList, SortedList

from .classifier import ClassId, class_lower_sides
from .errors import ClassMismatch, DimensionMismatch, InvariantViolation
from .geometry import HyperRect, intersects


class NaiveChecker:
    name = "naive"

    def __init__(self, dim: int):
        self.dim = dim
        self.accepted: list = []

    def enumerate_candidates(self, h: HyperRect) -> list:
        return list(self.accepted)

    def independence_update(self, h: HyperRect) -> bool:
        if len(h[0]) != self.dim:
            raise DimensionMismatch(f"{len(h[0])}-box offered to a {self.dim}-dimensional checker")
        for g in self.accepted:
            if intersects(g, h):
                return False
        self.accepted.append(h)
        return True

    def __len__(self) -> int:
        return len(self.accepted)


class IntervalChecker:
    name = "interval"

    def __init__(self, dim: int = 1):
        if dim != 1:
            raise DimensionMismatch("IntervalChecker handles d = 1 only")
        self.dim = 1
        self.accepted: list = []
        self._starts = SortedList()
        self._by_start: dict = {}

    def _predecessor(self, h: HyperRect) -> Optional[HyperRect]:
        i = self._starts.bisect_right(h[1][0])
        if i == 0:
            return None
        return self._by_start[self._starts[i - 1]]

    def enumerate_candidates(self, h: HyperRect) -> list:
        if len(h[0]) != 1:
            raise DimensionMismatch("IntervalChecker handles d = 1 only")
        g = self._predecessor(h)
        return [] if g is None else [g]

    def independence_update(self, h: HyperRect) -> bool:
        if len(h[0]) != 1:
            raise DimensionMismatch("IntervalChecker handles d = 1 only")
        g = self._predecessor(h)
        if g is not None and g[1][0] >= h[0][0]:
            return False
        start = h[0][0]
        self._starts.add(start)
        self._by_start[start] = h
        self.accepted.append(h)
        return True

    def __len__(self) -> int:
        return len(self.accepted)


class ThinChecker:
    """Range index on the starting points along ``axis`` (1-based).

    A stored box and the query both have side <= 1 along ``axis``, so a
    stored box can only reach the query if it starts in ``[lo - 1, hi]``.
    """

    name = "range_tree"

    def __init__(self, dim: int, axis: int, reach=1):
        if not 1 <= axis <= dim:
            raise ValueError(f"axis {axis} out of range for dimension {dim}")
        self.dim = dim
        self.axis = axis
        self.reach = reach
        self.accepted: list = []
        j = axis - 1
        self._index = SortedKeyList(key=lambda r: r[0][j])

    def _check_class(self, h: HyperRect) -> None:
        if len(h[0]) != self.dim:
            raise DimensionMismatch(f"{len(h[0])}-box offered to a {self.dim}-dimensional checker")
        j = self.axis - 1
        if h[1][j] - h[0][j] > self.reach:
            raise ClassMismatch(f"side along axis {self.axis} exceeds {self.reach}")

    def enumerate_candidates(self, h: HyperRect) -> list:
        self._check_class(h)
        j = self.axis - 1
        return list(self._index.irange_key(h[0][j] - self.reach, h[1][j]))

    def independence_update(self, h: HyperRect) -> bool:
        for g in self.enumerate_candidates(h):
            if intersects(g, h):
                return False
        self._index.add(h)
        self.accepted.append(h)
        return True

    def __len__(self) -> int:
        return len(self.accepted)


class GridChecker:
    """Sparse uniform grid with cells ``[m l_j, (m+1) l_j)`` on each axis.

    Class-consistent boxes (every side in ``(l_j, 2 l_j]``) touch at most 3^d
    cells, and a cell meets at most 5^d pairwise-disjoint such boxes; both caps
    are checked on every update.
    """

    name = "grid"

    def __init__(self, cell_sides):
        self.cell_sides = tuple(cell_sides)
        self.dim = len(self.cell_sides)
        if any(c <= 0 for c in self.cell_sides):
            raise ValueError("cell sides must be positive")
        self.accepted: list = []
        self.cells: dict = {}
        self.cell_cap = 5 ** self.dim
        self.span_cap = 3 ** self.dim
        self.max_cell_load = 0
        self.max_cells_per_box = 0

    @classmethod
    def for_class(cls, cid: ClassId) -> "GridChecker":
        return cls(class_lower_sides(cid))

    def _check_class(self, h: HyperRect) -> None:
        if len(h[0]) != self.dim:
            raise DimensionMismatch(f"{len(h[0])}-box offered to a {self.dim}-dimensional checker")
        for a, b, c in zip(h[0], h[1], self.cell_sides):
            side = b - a
            if not c < side <= 2 * c:
                raise ClassMismatch(f"side {side} not in ({c}, {2 * c}]")

    def _cells(self, h: HyperRect) -> list:
        ranges = []
        for a, b, c in zip(h[0], h[1], self.cell_sides):
            ranges.append(range(int(a // c), int(b // c) + 1))
        cells = [()]
        for r in ranges:
            cells = [cell + (m,) for cell in cells for m in r]
        if len(cells) > self.span_cap:
            raise InvariantViolation(f"box spans {len(cells)} grid cells (cap {self.span_cap})")
        self.max_cells_per_box = max(self.max_cells_per_box, len(cells))
        return cells

    def enumerate_candidates(self, h: HyperRect) -> list:
        self._check_class(h)
        seen = set()
        out = []
        for cell in self._cells(h):
            for g in self.cells.get(cell, ()):
                if id(g) not in seen:
                    seen.add(id(g))
                    out.append(g)
        return out

    def independence_update(self, h: HyperRect) -> bool:
        self._check_class(h)
        cells = self._cells(h)
        for cell in cells:
            for g in self.cells.get(cell, ()):
                if intersects(g, h):
                    return False
        for cell in cells:
            bucket = self.cells.setdefault(cell, [])
            bucket.append(h)
            if len(bucket) > self.cell_cap:
                raise InvariantViolation(f"grid cell {cell} holds {len(bucket)} boxes (cap {self.cell_cap})")
            self.max_cell_load = max(self.max_cell_load, len(bucket))
        self.accepted.append(h)
        return True

    def __len__(self) -> int:
        return len(self.accepted)


def independence_update(checker, h: HyperRect) -> bool:
    return checker.independence_update(h)


def enumerate_candidates(checker, h: HyperRect) -> list:
    return checker.enumerate_candidates(h)


def checker_for_class(cid: ClassId, dim: int):
    """Accelerated checker matching a size class."""
    if cid.kind == "I":
        return IntervalChecker()
    if cid.kind == "X":
        return ThinChecker(dim, cid.index[0])
    return GridChecker.for_class(cid)


def make_checker(kind: str, dim: int, cid: ClassId | None = None):
    if kind == "naive":
        return NaiveChecker(dim)
    if kind == "interval":
        return IntervalChecker(dim)
    if kind == "range_tree":
        if cid is None or cid.kind != "X":
            raise ValueError("range_tree checker needs a thin class X(x)")
        return ThinChecker(dim, cid.index[0])
    if kind == "grid":
        if cid is None or cid.kind != "Y":
            raise ValueError("grid checker needs a similar-size class Y(y)")
        return GridChecker.for_class(cid)
    if kind == "auto":
        if cid is not None:
            return checker_for_class(cid, dim)
        return IntervalChecker() if dim == 1 else NaiveChecker(dim)
    raise ValueError(f"unknown checker kind {kind!r}")
