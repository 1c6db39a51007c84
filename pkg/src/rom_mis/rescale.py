"""Bounding-box removal by non-uniform rescaling.

The first ceil(n/2) arrivals are only used to collect left endpoints.  Their
distinct values p_1 < ... < p_t define a piecewise-linear map ``s`` with
``s(p_i) = i`` that is linear between breakpoints and constant ``t`` to the
right of p_t.  Every later arrival is read through ``s`` (per axis for boxes)
and forwarded to a two-phase runner for the box [0, ceil(n/2)]^d.  Arrivals
whose left endpoint falls outside [p_1, p_t] on some axis form the ignored
set F: the inner runner sees the point box [0, 0]^d in their place and any
selection of it is dropped.
"""
from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import Iterable, Sequence

from gmpy2 import mpq

from .bounded_rom import (BoundedHyperrectRunner, BoundedInstanceMeta, BoundedIntervalRunner,
                          max_cell_containment)
from .errors import DimensionMismatch, ProtocolError, ScaleDomainError
from .geometry import Coordinate, HyperRect, SigmaObject


@dataclass(frozen=True)
class Scale:
    breakpoints: tuple

    def __post_init__(self):
        bp = self.breakpoints
        if not bp:
            raise ValueError("a scale needs at least one breakpoint")
        if any(bp[i] >= bp[i + 1] for i in range(len(bp) - 1)):
            raise ValueError("breakpoints must be strictly increasing")

    @property
    def t(self) -> int:
        return len(self.breakpoints)

    def __call__(self, x) -> Coordinate:
        return apply_scale(self, x)


def build_scale(points: Iterable) -> Scale:
    distinct = sorted(set(points))
    if not distinct:
        raise ValueError("cannot build a scale from no points")
    return Scale(tuple(distinct))


def apply_scale(scale: Scale, x) -> Coordinate:
    bp = scale.breakpoints
    if x < bp[0]:
        raise ScaleDomainError(f"{x} lies left of the first breakpoint {bp[0]}")
    t = len(bp)
    if x >= bp[-1]:
        return t
    i = bisect_right(bp, x)  # bp[i-1] <= x < bp[i], 1 <= i <= t-1
    p = bp[i - 1]
    if x == p:
        return i
    return i + mpq(x - p) / (bp[i] - p)


def ceil_log2_int(n: int) -> int:
    return max(0, (n - 1).bit_length())


def scaled_box_side(n: int) -> int:
    """Side of the box the rescaled second phase lives in: ceil(n/2)."""
    return -(-n // 2)


def density_bound(n: int) -> int:
    """4 ceil(log2 n): the per-cell density the rescaled second phase is promised."""
    return 4 * ceil_log2_int(n)


def ignored_bound(n: int) -> int:
    """8 ceil(log2 n): bound on |F| when the gaps event holds."""
    return 8 * ceil_log2_int(n)


class FullPipeline:
    """Scale preparation followed by outsourcing to a bounded runner.

    ``inner`` is ``"intervals"`` (exact class sizes, d = 1 only) or
    ``"hyperrects"`` (greedy estimates).  With ``trace=True`` the scaled
    stream fed to the inner runner is kept in :attr:`fed`.
    """

    def __init__(self, n: int, d: int = 1, inner: str = "intervals", trace: bool = False):
        if inner not in ("intervals", "hyperrects"):
            raise ValueError(f"unknown inner runner {inner!r}")
        if inner == "intervals" and d != 1:
            raise DimensionMismatch("the interval pipeline needs d = 1")
        self.n = n
        self.d = d
        self.inner_kind = inner
        self.trace = trace
        self.half = -(-n // 2)
        self.steps = 0
        self.selected: list = []
        self.selected_steps: list = []
        self.lefts = [[] for _ in range(d)]
        self._lefts0 = self.lefts[0]
        self.scales: list | None = None
        self.inner = None
        self.ignored_count = 0
        self.fed: list = []
        self.fallback_used = False
        self._sentinel = HyperRect.raw((0,) * d, (0,) * d)

    @property
    def phase(self) -> str:
        return "scale_prep" if self.steps < self.half else "outsourcing"

    @property
    def observation_selections(self) -> int:
        return sum(1 for s in self.selected_steps if s <= self.half)

    def _start_outsourcing(self) -> None:
        self.scales = [build_scale(pts) for pts in self.lefts]
        self._bp = self.scales[0].breakpoints
        self.lefts = None
        meta = BoundedInstanceMeta(n=self.n - self.half, K=max(1, self.half),
                                   D=density_bound(self.n), d=self.d)
        if self.inner_kind == "intervals":
            self.inner = BoundedIntervalRunner(meta)
        else:
            self.inner = BoundedHyperrectRunner(meta)

    def offer(self, h: HyperRect) -> bool:
        if self.steps >= self.n:
            raise ProtocolError(f"arrival {self.steps + 1} exceeds the announced n = {self.n}")
        lo, hi = h
        if len(lo) != self.d:
            raise DimensionMismatch(f"{len(lo)}-box offered to a {self.d}-dimensional pipeline")
        self.steps = steps = self.steps + 1
        if steps <= self.half:
            if self.d == 1:
                self._lefts0.append(lo[0])
            else:
                for j in range(self.d):
                    self.lefts[j].append(lo[j])
            if steps == self.half:
                self._start_outsourcing()
            return False

        if self.d == 1:
            scaled = self._scale_interval(lo[0], hi[0])
            in_F = scaled is None
        else:
            in_F = False
            for j, sc in enumerate(self.scales):
                bp = sc.breakpoints
                if lo[j] < bp[0] or lo[j] > bp[-1]:
                    in_F = True
                    break
            scaled = None if in_F else HyperRect.raw(
                tuple(apply_scale(sc, v) for sc, v in zip(self.scales, lo)),
                tuple(apply_scale(sc, v) for sc, v in zip(self.scales, hi)))
        if in_F:
            self.ignored_count += 1
            scaled = self._sentinel
        if self.trace:
            self.fed.append(scaled)
        inner_ok = self.inner.offer(scaled)

        if steps == self.n and not self.selected:
            ok = True
            self.fallback_used = True
        else:
            ok = inner_ok and not in_F
        if ok:
            self.selected.append(h)
            self.selected_steps.append(steps)
        return ok

    def _scale_interval(self, a, b):
        """Scaled [s(a), s(b)], or None when a lies outside [p_1, p_t]."""
        bp = self._bp
        t = len(bp)
        if a < bp[0] or a > bp[-1]:
            return None
        i = bisect_right(bp, a)
        p = bp[i - 1]
        sa = i if a == p else i + mpq(a - p) / (bp[i] - p)
        if b >= bp[-1]:
            sb = t
        else:
            # b >= a, so its breakpoint index is at least i
            k = bisect_right(bp, b, i - 1)
            q = bp[k - 1]
            sb = k if b == q else k + mpq(b - q) / (bp[k] - q)
        return HyperRect.raw((sa,), (sb,))

    def finish(self) -> list:
        if self.steps != self.n:
            raise ProtocolError(f"stream ended after {self.steps} of {self.n} announced arrivals")
        if self.inner is not None:
            self.inner.finish()
        return list(self.selected)

    def run(self, stream: Iterable[HyperRect]) -> list:
        for h in stream:
            self.offer(h)
        return self.finish()

    @property
    def chosen_class(self):
        return None if self.inner is None else self.inner.chosen_class

    def scaled_density(self) -> int:
        """Largest open-unit-cell containment count of the traced scaled stream."""
        if not self.trace:
            raise RuntimeError("pipeline was not run with trace=True")
        return max_cell_containment(self.fed)

    def scaled_extent(self) -> Coordinate:
        if not self.trace:
            raise RuntimeError("pipeline was not run with trace=True")
        return max((v for h in self.fed for v in h[1]), default=0)


def run_full_intervals(stream: Sequence[HyperRect], n: int | None = None) -> list:
    stream = list(stream)
    n = len(stream) if n is None else n
    return FullPipeline(n, 1, "intervals").run(stream)


def run_full_hyperrects(stream: Sequence[HyperRect], n: int | None = None, d: int | None = None) -> list:
    stream = list(stream)
    n = len(stream) if n is None else n
    if d is None:
        d = len(stream[0][0]) if stream else 1
    return FullPipeline(n, d, "hyperrects").run(stream)


class SigmaPipeline:
    """Feed circumscribing boxes to the hyperrectangle pipeline."""

    def __init__(self, n: int, d: int, trace: bool = False):
        self.box_pipeline = FullPipeline(n, d, "hyperrects", trace=trace)
        self.selected: list = []

    def offer(self, f: SigmaObject) -> bool:
        ok = self.box_pipeline.offer(f.out_box)
        if ok:
            self.selected.append(f)
        return ok

    def finish(self) -> list:
        self.box_pipeline.finish()
        return list(self.selected)

    def run(self, stream: Iterable[SigmaObject]) -> list:
        for f in stream:
            self.offer(f)
        return self.finish()


def run_full_sigma(stream: Sequence[SigmaObject], n: int | None = None, d: int | None = None) -> list:
    stream = list(stream)
    n = len(stream) if n is None else n
    if d is None:
        d = stream[0].dim if stream else 1
    return SigmaPipeline(n, d).run(stream)


def ignored_set(stream: Sequence[HyperRect], n: int | None = None) -> list:
    """Second-phase arrivals whose left endpoint leaves the scale's span on some axis."""
    n = len(stream) if n is None else n
    half = -(-n // 2)
    d = len(stream[0][0])
    scales = [build_scale(h[0][j] for h in stream[:half]) for j in range(d)]
    out = []
    for h in stream[half:]:
        if any(h[0][j] < sc.breakpoints[0] or h[0][j] > sc.breakpoints[-1] for j, sc in enumerate(scales)):
            out.append(h)
    return out


def max_gap_of_arrivals(stream: Sequence[HyperRect], axis: int = 1) -> int:
    """Largest rank gap left by the first-phase arrivals along ``axis``.

    All objects are ranked by left endpoint (ties by arrival position); the
    ranks of the first ceil(n/2) arrivals, padded with 1 and n, give the gaps.
    """
    n = len(stream)
    if n < 2:
        return 0
    half = -(-n // 2)
    j = axis - 1
    order = sorted(range(n), key=lambda p: (stream[p][0][j], p))
    ranks = [r + 1 for r, p in enumerate(order) if p < half]
    marks = [1] + ranks + [n]
    return max(b - a for a, b in zip(marks, marks[1:]))


def gaps_event_holds(stream: Sequence[HyperRect]) -> bool:
    n = len(stream)
    if n < 2:
        return True
    bound = 4 * math.ceil(math.log2(n))
    return all(max_gap_of_arrivals(stream, a) <= bound for a in range(1, len(stream[0][0]) + 1))
