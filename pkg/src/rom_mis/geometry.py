"""Exact coordinates, closed axis-aligned boxes and sigma-rectangular objects.

Coordinates are exact rationals.  Integral values are kept as plain Python
``int`` (fast to hash, compare and sort); everything else is a ``gmpy2.mpq``.
Floats are rejected outright so that no algorithmic decision ever depends on
rounding.

Axes are numbered from 1 in every public function that takes an axis
argument, matching the ``[d] = {1, ..., d}`` convention used by the size
classes.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from operator import itemgetter
from typing import Any, Iterable, Sequence, Union

from gmpy2 import mpq, mpz

from .errors import DimensionMismatch, OutOfRange

Coordinate = Union[int, "mpq"]

_MPQ = type(mpq(1, 2))
_MPZ = type(mpz(1))
_RATIONAL_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


def coord(value: Any) -> Coordinate:
    """Convert ``value`` to a canonical exact coordinate.

    Accepts ints, gmpy2 rationals, ``fractions.Fraction`` and strings of the
    form ``p`` or ``p/q``.  Integral results come back as ``int``.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not coordinates")
    if isinstance(value, int):
        return value
    if isinstance(value, _MPZ):
        return int(value)
    if isinstance(value, _MPQ):
        return int(value.numerator) if value.denominator == 1 else value
    if isinstance(value, str):
        text = value.strip()
        if not _RATIONAL_RE.match(text):
            raise ValueError(f"not a rational literal: {value!r}")
        if "/" in text and int(text.split("/")[1]) == 0:
            raise ZeroDivisionError(f"zero denominator in {value!r}")
        return coord(mpq(text))
    if isinstance(value, float):
        raise TypeError("floating point coordinates are not allowed; use ints, 'p/q' strings or Fractions")
    if isinstance(value, Rational):
        return coord(mpq(int(value.numerator), int(value.denominator)))
    raise TypeError(f"cannot interpret {type(value).__name__} as a coordinate")


def ratio(num: Any, den: Any) -> Coordinate:
    """Exact quotient ``num / den``; never produces a float."""
    return coord(mpq(num) / mpq(den))


def format_coord(x: Coordinate) -> str:
    return str(x)


class HyperRect(tuple):
    """Closed box ``[lo_1, hi_1] x ... x [lo_d, hi_d]``.

    Stored as the pair ``(lo, hi)`` of coordinate tuples, so a ``HyperRect``
    unpacks like a 2-tuple.  Degenerate sides (``lo == hi``) are allowed.
    """

    __slots__ = ()

    def __new__(cls, lo: Iterable[Any], hi: Iterable[Any]) -> "HyperRect":
        lo = tuple(coord(v) for v in lo)
        hi = tuple(coord(v) for v in hi)
        if len(lo) != len(hi):
            raise DimensionMismatch(f"lo has {len(lo)} entries, hi has {len(hi)}")
        if not lo:
            raise ValueError("a box needs at least one dimension")
        for j, (a, b) in enumerate(zip(lo, hi), start=1):
            if a > b:
                raise ValueError(f"lo > hi on axis {j}: {a} > {b}")
        return tuple.__new__(cls, (lo, hi))

    @classmethod
    def raw(cls, lo: tuple, hi: tuple) -> "HyperRect":
        """Build without conversion or validation (hot paths only)."""
        return tuple.__new__(cls, (lo, hi))

    @classmethod
    def interval(cls, a: Any, b: Any) -> "HyperRect":
        return cls((a,), (b,))

    @classmethod
    def point(cls, p: Sequence[Any]) -> "HyperRect":
        return cls(p, p)

    lo = property(itemgetter(0))
    hi = property(itemgetter(1))

    @property
    def dim(self) -> int:
        return len(self[0])

    def sides(self) -> tuple:
        return tuple(b - a for a, b in zip(self[0], self[1]))

    def __getnewargs__(self):
        return (self[0], self[1])

    def __repr__(self) -> str:
        parts = " x ".join(f"[{a}, {b}]" for a, b in zip(self[0], self[1]))
        return f"HyperRect({parts})"


def intersects(a: HyperRect, b: HyperRect) -> bool:
    """True iff the closed boxes share at least one point (touching counts)."""
    alo, ahi = a
    blo, bhi = b
    d = len(alo)
    if d != len(blo):
        raise DimensionMismatch(f"cannot intersect a {d}-box with a {len(blo)}-box")
    for j in range(d):
        if alo[j] > bhi[j] or blo[j] > ahi[j]:
            return False
    return True


def side_length(h: HyperRect, j: int) -> Coordinate:
    """Length of ``h`` along axis ``j`` (1-based)."""
    if not 1 <= j <= h.dim:
        raise IndexError(f"axis {j} out of range for a {h.dim}-box")
    return h[1][j - 1] - h[0][j - 1]


def contains(outer: HyperRect, inner: HyperRect) -> bool:
    if outer.dim != inner.dim:
        raise DimensionMismatch("containment between boxes of different dimension")
    return all(o_lo <= i_lo and i_hi <= o_hi
               for o_lo, o_hi, i_lo, i_hi in zip(outer[0], outer[1], inner[0], inner[1]))


def is_independent_set(objs: Sequence[HyperRect]) -> bool:
    """Pairwise O(m^2) disjointness check.  Verification only."""
    objs = list(objs)
    for i in range(len(objs)):
        for j in range(i + 1, len(objs)):
            if intersects(objs[i], objs[j]):
                return False
    return True


def find_intersecting_pair(objs: Sequence[HyperRect]):
    """Sweep along axis 1 and return the first intersecting pair, or None.

    Same answer as :func:`is_independent_set` but fast on large, sparse
    outputs: after sorting by left endpoint, each box is compared only with
    the boxes whose axis-1 projection starts before it ends.
    """
    objs = sorted(objs, key=lambda h: h[0][0])
    for i, a in enumerate(objs):
        a_hi = a[1][0]
        for b in objs[i + 1:]:
            if b[0][0] > a_hi:
                break
            if intersects(a, b):
                return a, b
    return None


def check_independent(objs: Sequence[HyperRect]) -> bool:
    return find_intersecting_pair(objs) is None


def bounding_box(objs: Iterable[HyperRect]) -> HyperRect:
    objs = list(objs)
    if not objs:
        raise ValueError("bounding box of an empty collection")
    d = objs[0].dim
    lo = tuple(min(h[0][j] for h in objs) for j in range(d))
    hi = tuple(max(h[1][j] for h in objs) for j in range(d))
    return HyperRect.raw(lo, hi)


@dataclass(frozen=True)
class SigmaObject:
    """An object sandwiched between an inscribed and a circumscribed box.

    Only the boxes take part in any computation; ``shape_tag`` is an opaque
    description for generators and file output (e.g. an ellipse's centre and
    semi-axes).
    """

    out_box: HyperRect
    in_box: HyperRect
    sigma: Coordinate
    shape_tag: Any = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "sigma", coord(self.sigma))
        if self.out_box.dim != self.in_box.dim:
            raise DimensionMismatch("in/out boxes differ in dimension")
        # sigma = 1 is accepted so that plain boxes can be wrapped.
        if self.sigma < 1:
            raise ValueError(f"sigma must be >= 1, got {self.sigma}")
        if not contains(self.out_box, self.in_box):
            raise ValueError("in_box is not contained in out_box")
        for j in range(1, self.out_box.dim + 1):
            if side_length(self.in_box, j) * self.sigma < side_length(self.out_box, j):
                raise ValueError(f"axis {j}: in-box side is shorter than out-box side / sigma")

    @property
    def dim(self) -> int:
        return self.out_box.dim


def out_box(f: SigmaObject) -> HyperRect:
    return f.out_box


def box_as_sigma(h: HyperRect, sigma: Any = 1) -> SigmaObject:
    return SigmaObject(h, h, sigma, shape_tag=("box",))


# Largest rationals r with d * r^2 <= 1, i.e. just below 1/sqrt(d); the
# inscribed box of an ellipsoid with semi-axes a is then centre +- r * a.
_ELLIPSE_INNER = {1: mpq(1), 2: mpq(70, 99), 3: mpq(56, 97)}


def ellipse_inner_ratio(d: int) -> Coordinate:
    if d in _ELLIPSE_INNER:
        return coord(_ELLIPSE_INNER[d])
    r = Fraction(1 / d ** 0.5).limit_denominator(1000)
    while d * r * r > 1:
        r -= Fraction(1, 1000)
    return coord(r)


def ellipse(center: Sequence[Any], semi_axes: Sequence[Any]) -> SigmaObject:
    """Axis-aligned ellipsoid as a sigma-rectangular object.

    The out-box is the exact bounding box.  The in-box uses the rational
    inner ratio ``r`` from :func:`ellipse_inner_ratio` (its corners lie inside
    the ellipsoid because ``d * r^2 <= 1``), and ``sigma = 1 / r``.  For the
    plane this gives ``sigma = 99/70``, the nearest rational above sqrt(2)
    that keeps the corners inside.
    """
    c = tuple(coord(v) for v in center)
    a = tuple(coord(v) for v in semi_axes)
    if len(c) != len(a):
        raise DimensionMismatch("centre and semi-axes differ in length")
    if any(v <= 0 for v in a):
        raise ValueError("semi-axes must be positive")
    r = ellipse_inner_ratio(len(c))
    outer = HyperRect([ci - ai for ci, ai in zip(c, a)], [ci + ai for ci, ai in zip(c, a)])
    inner = HyperRect([ci - r * ai for ci, ai in zip(c, a)], [ci + r * ai for ci, ai in zip(c, a)])
    return SigmaObject(outer, inner, ratio(1, r), shape_tag=("ellipse", c, a))


@dataclass
class Instance:
    """An input set in canonical (pre-shuffle) order.

    ``planted_opt`` is a certified optimum when the generator knows one;
    ``meta`` carries generator-specific annotations.
    """

    dim: int
    objects: list
    declared_K: Coordinate | None = None
    planted_opt: int | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be positive")
        if self.declared_K is not None:
            self.declared_K = coord(self.declared_K)
        for obj in self.objects:
            box = obj.out_box if isinstance(obj, SigmaObject) else obj
            if box.dim != self.dim:
                raise DimensionMismatch(f"object of dimension {box.dim} in a {self.dim}-dimensional instance")
            if self.declared_K is not None:
                if any(v < 0 for v in box[0]) or any(v > self.declared_K for v in box[1]):
                    raise OutOfRange(f"{box!r} is not inside [0, {self.declared_K}]^{self.dim}")

    @property
    def n(self) -> int:
        return len(self.objects)

    @property
    def is_sigma(self) -> bool:
        return bool(self.objects) and isinstance(self.objects[0], SigmaObject)

    def boxes(self) -> list:
        """Out-boxes for sigma instances, the objects themselves otherwise."""
        if self.is_sigma:
            return [f.out_box for f in self.objects]
        return list(self.objects)
