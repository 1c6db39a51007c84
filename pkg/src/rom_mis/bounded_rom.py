"""Two-phase random-order algorithms for (K, D)-bounded inputs.

Both runners watch the first ceil(n/2) arrivals without selecting anything,
pick one size class m from what they saw, and then run greedy on class m
only.  If nothing has been selected when the very last object arrives, that
object is taken, so every run with n >= 2 returns at least one object.

:class:`BoundedIntervalRunner` sizes the observed classes exactly (offline
interval scheduling).  :class:`BoundedHyperrectRunner` estimates them with a
per-class greedy and balances thin against similar-size classes with the
threshold ``(k+1)^d / max(D, 1)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .classifier import ClassId, ClassParams, hyperrect_class, interval_class
from .errors import DimensionMismatch, ProtocolError
from .geometry import Coordinate, HyperRect, coord
from .structures import IntervalChecker, checker_for_class


@dataclass
class BoundedInstanceMeta:
    """What the runner is told up front: n, the box side K, the density D."""

    n: int
    K: Coordinate
    D: int = 0
    d: int = 1

    def __post_init__(self):
        self.K = coord(self.K)
        if self.n < 0 or self.D < 0 or self.d < 1:
            raise ValueError("n and D must be non-negative and d positive")


def exact_interval_opt(intervals: Iterable[HyperRect]) -> tuple:
    """Maximum set of pairwise disjoint closed intervals (earliest finish first)."""
    ordered = sorted(intervals, key=lambda h: h[1][0])
    witness = []
    last_end = None
    for h in ordered:
        if len(h[0]) != 1:
            raise DimensionMismatch("exact_interval_opt needs d = 1")
        if last_end is None or h[0][0] > last_end:
            witness.append(h)
            last_end = h[1][0]
    return len(witness), witness


def select_class_intervals(opt_L: Sequence[int], k: int) -> int:
    """Largest class among 1..k (smallest index on ties); 0 if opt_L[0] > k * that."""
    if len(opt_L) != k + 1:
        raise ValueError(f"expected {k + 1} class sizes, got {len(opt_L)}")
    m = 1
    for i in range(2, k + 1):
        if opt_L[i] > opt_L[m]:
            m = i
    if opt_L[0] > k * opt_L[m]:
        return 0
    return m


def select_class_hyperrects(Lhat_X: Mapping[int, int], Lhat_Y: Mapping[tuple, int],
                            k: int, d: int, D: int) -> ClassId:
    """Balance the best thin class against the best similar-size class.

    Missing entries count as 0.  Ties go to the smallest axis / the
    lexicographically smallest tuple; the tuple (1, ..., 1) stands in when no
    similar-size class was observed.
    """
    m1 = 1
    for x in range(2, d + 1):
        if Lhat_X.get(x, 0) > Lhat_X.get(m1, 0):
            m1 = x
    best_y = (1,) * d
    best_val = Lhat_Y.get(best_y, 0)
    for y in sorted(Lhat_Y):
        if Lhat_Y[y] > best_val:
            best_y, best_val = y, Lhat_Y[y]
    # L1 >= ((k+1)^d / D) * L2, cross-multiplied; D = 0 is treated as 1.
    if Lhat_X.get(m1, 0) * max(D, 1) >= (k + 1) ** d * best_val:
        return ClassId.thin(m1)
    return ClassId.similar(best_y)


class _TwoPhaseRunner:
    def __init__(self, meta: BoundedInstanceMeta, trace: bool = False):
        self.meta = meta
        self.n = meta.n
        self.half = -(-meta.n // 2)
        self.params = ClassParams(meta.K, meta.d)
        self.k = self.params.k
        self.trace = trace
        self.steps = 0
        self.selected: list = []
        self.selected_steps: list = []
        self.m = None
        self.fallback_used = False
        self._action = None
        self.action_seen: dict = {}

    @property
    def phase(self) -> str:
        return "observation" if self.steps < self.half else "action"

    @property
    def observation_selections(self) -> int:
        return sum(1 for s in self.selected_steps if s <= self.half)

    def offer(self, h: HyperRect) -> bool:
        if self.steps >= self.n:
            raise ProtocolError(f"arrival {self.steps + 1} exceeds the announced n = {self.n}")
        if len(h[0]) != self.meta.d:
            raise DimensionMismatch(f"{len(h[0])}-box offered to a {self.meta.d}-dimensional runner")
        self.steps += 1
        if self.steps <= self.half:
            self._observe(h)
            if self.steps == self.half:
                self._choose()
            return False
        cls = self._classify(h)
        if self.trace:
            self.action_seen.setdefault(cls, []).append(h)
        if cls == self.m and self._action.independence_update(h):
            ok = True
        elif self.steps == self.n and not self.selected:
            ok = True
            self.fallback_used = True
        else:
            ok = False
        if ok:
            self.selected.append(h)
            self.selected_steps.append(self.steps)
        return ok

    def finish(self) -> list:
        if self.steps != self.n:
            raise ProtocolError(f"stream ended after {self.steps} of {self.n} announced arrivals")
        return list(self.selected)

    def run(self, stream: Iterable[HyperRect]) -> list:
        for h in stream:
            self.offer(h)
        return self.finish()


class BoundedIntervalRunner(_TwoPhaseRunner):
    def __init__(self, meta: BoundedInstanceMeta, trace: bool = False):
        if meta.d != 1:
            raise DimensionMismatch("the interval runner needs d = 1")
        super().__init__(meta, trace)
        self.observed = [[] for _ in range(self.k + 1)]
        self.opt_L: list = []

    def _classify(self, h: HyperRect) -> int:
        length = h[1][0] - h[0][0]
        if 0 <= length <= 1:
            return 0
        return interval_class(length, self.params)

    def _observe(self, h: HyperRect) -> None:
        self.observed[self._classify(h)].append(h)

    def _choose(self) -> None:
        self.opt_L = [exact_interval_opt(L)[0] for L in self.observed]
        self.m = select_class_intervals(self.opt_L, self.k)
        self._action = IntervalChecker()
        if not self.trace:
            self.observed = None

    @property
    def chosen_class(self) -> ClassId | None:
        return None if self.m is None else ClassId.interval(self.m)


class BoundedHyperrectRunner(_TwoPhaseRunner):
    def __init__(self, meta: BoundedInstanceMeta, trace: bool = False):
        super().__init__(meta, trace)
        self.greedy_by_class: dict = {}
        self.observed: dict = {}
        self.estimates: dict = {}

    def _classify(self, h: HyperRect) -> ClassId:
        return hyperrect_class(h, self.params)

    def _observe(self, h: HyperRect) -> None:
        cid = self._classify(h)
        checker = self.greedy_by_class.get(cid)
        if checker is None:
            checker = self.greedy_by_class[cid] = checker_for_class(cid, self.meta.d)
        checker.independence_update(h)
        if self.trace:
            self.observed.setdefault(cid, []).append(h)

    def _choose(self) -> None:
        self.estimates = {cid: len(c) for cid, c in self.greedy_by_class.items()}
        Lhat_X = {cid.index[0]: v for cid, v in self.estimates.items() if cid.kind == "X"}
        Lhat_Y = {cid.index: v for cid, v in self.estimates.items() if cid.kind == "Y"}
        self.m = select_class_hyperrects(Lhat_X, Lhat_Y, self.k, self.meta.d, self.meta.D)
        self._action = checker_for_class(self.m, self.meta.d)
        if not self.trace:
            self.greedy_by_class = {}

    @property
    def chosen_class(self) -> ClassId | None:
        return self.m


def run_bounded_intervals(stream: Sequence[HyperRect], meta: BoundedInstanceMeta) -> list:
    return BoundedIntervalRunner(meta).run(stream)


def run_bounded_hyperrects(stream: Sequence[HyperRect], meta: BoundedInstanceMeta) -> list:
    return BoundedHyperrectRunner(meta).run(stream)


# Offline diagnostics -------------------------------------------------------

def _floor(x) -> int:
    if isinstance(x, int):
        return x
    return int(x.numerator) // int(x.denominator)


def cell_containment_counts(objs: Iterable[HyperRect], axis: int = 1) -> dict:
    """Per integer i, how many projections on ``axis`` lie inside the open cell (i, i+1)."""
    j = axis - 1
    counts: dict = {}
    for h in objs:
        a, b = h[0][j], h[1][j]
        i = _floor(a)
        if i < a and b < i + 1:
            counts[i] = counts.get(i, 0) + 1
    return counts


def max_cell_containment(objs: Sequence[HyperRect], axis: int | None = None) -> int:
    """Smallest D for which the objects satisfy the density part of (K, D)-boundedness."""
    objs = list(objs)
    if not objs:
        return 0
    axes = [axis] if axis is not None else range(1, len(objs[0][0]) + 1)
    return max((max(cell_containment_counts(objs, a).values(), default=0) for a in axes), default=0)


def is_bounded(objs: Sequence[HyperRect], K, D: int) -> bool:
    objs = list(objs)
    for h in objs:
        if any(v < 0 for v in h[0]) or any(v > K for v in h[1]):
            return False
    return max_cell_containment(objs) <= D


def event_E_holds(arrivals: Sequence[HyperRect], K, delta=(1, 10)) -> bool:
    """Whether every large interval class splits evenly between the phases.

    A class i is large when opt(S_i) >= 1000 ln k; the event requires
    min(opt(L_i), opt(R_i)) >= (1 - delta) opt(S_i) / 2 for all large i.
    Test statistic only.
    """
    params = ClassParams(K)
    half = -(-len(arrivals) // 2)
    threshold = 1000 * math.log(params.k)
    num, den = delta
    S: dict = {}
    L: dict = {}
    R: dict = {}
    for pos, h in enumerate(arrivals):
        i = interval_class(h[1][0] - h[0][0], params)
        S.setdefault(i, []).append(h)
        (L if pos < half else R).setdefault(i, []).append(h)
    for i, members in S.items():
        opt_S = exact_interval_opt(members)[0]
        if opt_S < threshold:
            continue
        low = min(exact_interval_opt(L.get(i, []))[0], exact_interval_opt(R.get(i, []))[0])
        if 2 * den * low < (den - num) * opt_S:
            return False
    return True
