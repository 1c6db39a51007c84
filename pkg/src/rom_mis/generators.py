"""Instance families with a structural guarantee checked after generation.

Every generator takes an explicit ``numpy.random.Generator`` (or a seed) and
returns an :class:`Instance` in canonical order.  Arrival order is the
harness's business, not the generator's.
"""
from __future__ import annotations

import math
import random
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from gmpy2 import mpq

from .bounded_rom import max_cell_containment
from .classifier import ClassId, ClassParams, hyperrect_class, interval_class
from .errors import InvariantViolation
from .geometry import (HyperRect, Instance, SigmaObject, contains, coord, ellipse, intersects,
                       is_independent_set)

FAMILIES = ("greedy_lb", "sparse_bounded", "similar_size", "planted_classes",
            "huge_coordinates", "cross_fig5", "ellipses", "ellipse_packing")


def _rng(seed_or_rng) -> np.random.Generator:
    if isinstance(seed_or_rng, np.random.Generator):
        return seed_or_rng
    return np.random.default_rng(seed_or_rng)


def _frac(rng, lo, hi, den: int = 16):
    """Random rational in [lo, hi] on the 1/den lattice."""
    a, b = math.ceil(lo * den), math.floor(hi * den)
    if a > b:
        raise ValueError(f"empty lattice range [{lo}, {hi}] at denominator {den}")
    return coord(mpq(int(rng.integers(a, b + 1)), den))


# Blocker instance where greedy does badly ----------------------------------------

def gen_greedy_lb(n: int, seed=None) -> Instance:
    """sqrt(n) disjoint unit intervals and n - sqrt(n) copies of one interval meeting all of them."""
    s = math.isqrt(n)
    if s * s != n or n < 4:
        raise ValueError(f"n must be a perfect square >= 4, got {n}")
    units = [HyperRect.raw((2 * i,), (2 * i + 1,)) for i in range(s)]
    blocker = HyperRect.raw((0,), (2 * s - 1,))
    objs = units + [blocker] * (n - s)
    return Instance(1, objs, declared_K=2 * s, planted_opt=s, meta={"family": "greedy_lb"})


# Sparse thin instances ---------------------------------------------------------

def gen_sparse_bounded(K: int, D: int, n: int, d: int = 1, seed=None, den: int = 8) -> Instance:
    """Objects with side <= 1 on axis 1 and at most D left endpoints per cell [m, m+1) of that axis.

    Other axes get arbitrary intervals inside [0, K].  Objects whose axis-1
    projection lies inside an open unit cell also have their left endpoint in
    that cell, so the instance is (K, D)-bounded along axis 1.
    """
    if K < 1 or D < 1:
        raise ValueError("K and D must be positive")
    if n > K * D:
        raise ValueError(f"at most K*D = {K * D} objects fit, asked for {n}")
    rng = _rng(seed)
    load = [0] * K
    free = list(range(K))
    objs = []
    for _ in range(n):
        pos = int(rng.integers(len(free)))
        m = free[pos]
        load[m] += 1
        if load[m] == D:
            free[pos] = free[-1]
            free.pop()
        a = m + _frac(rng, 0, 1 - mpq(1, den), den)
        b = a + _frac(rng, 0, min(1, K - a), den)
        lo, hi = [coord(a)], [coord(b)]
        for _ in range(1, d):
            u = _frac(rng, 0, K, den)
            v = _frac(rng, 0, K, den)
            lo.append(min(u, v))
            hi.append(max(u, v))
        objs.append(HyperRect.raw(tuple(lo), tuple(hi)))
    inst = Instance(d, objs, declared_K=K, meta={"family": "sparse_bounded", "D": D})
    verify_sparse_bounded(inst, D)
    return inst


def left_endpoint_cell_counts(objs, axis: int = 1) -> dict:
    """How many left endpoints fall into each half-open cell [m, m+1) along ``axis``."""
    counts: dict = {}
    j = axis - 1
    for h in objs:
        a = h[0][j]
        m = a if isinstance(a, int) else int(a.numerator) // int(a.denominator)
        counts[m] = counts.get(m, 0) + 1
    return counts


def verify_sparse_bounded(inst: Instance, D: int, axis: int = 1) -> None:
    j = axis - 1
    for h in inst.objects:
        if h[1][j] - h[0][j] > 1:
            raise InvariantViolation(f"{h!r} is not thin along axis {axis}")
    worst = max(left_endpoint_cell_counts(inst.objects, axis).values(), default=0)
    if worst > D:
        raise InvariantViolation(f"a unit cell holds {worst} left endpoints (D = {D})")
    if max_cell_containment(inst.objects, axis) > D:
        raise InvariantViolation("open-cell containment exceeds D")


# Similar sizes -----------------------------------------------------------------

def gen_similar_size(delta: int, d: int, n: int, seed=None, den: int = 8, spread=None) -> Instance:
    """Boxes with every side in [1, delta], so side ratios per axis stay in [1/delta, delta]."""
    if delta < 1:
        raise ValueError("delta must be >= 1")
    rng = _rng(seed)
    if spread is None:
        spread = max(2, math.ceil(n ** (1 / d))) * delta
    objs = []
    for _ in range(n):
        lo, hi = [], []
        for _ in range(d):
            side = _frac(rng, 1, delta, den)
            a = _frac(rng, 0, spread, den)
            lo.append(a)
            hi.append(coord(a + side))
        objs.append(HyperRect.raw(tuple(lo), tuple(hi)))
    inst = Instance(d, objs, meta={"family": "similar_size", "delta": delta})
    verify_similar_size(inst, delta)
    return inst


def verify_similar_size(inst: Instance, delta) -> None:
    for j in range(inst.dim):
        sides = [h[1][j] - h[0][j] for h in inst.objects]
        if not sides:
            return
        lo, hi = min(sides), max(sides)
        if lo <= 0 or hi > delta * lo:
            raise InvariantViolation(f"axis {j + 1}: side ratio {hi}/{lo} exceeds {delta}")


# One dominant size class -------------------------------------------------------

def gen_planted_classes(d: int = 1, seed=None, K: int = 1024, planted: int = 100,
                        noise_per_class: int = 2, den: int = 8) -> Instance:
    """``planted`` disjoint objects of one size class among a little noise.

    d = 1: intervals of length 8 (class 3) spaced 10 apart; every other class
    0..k gets at most ``noise_per_class`` random intervals.
    d = 2: 8 x 8 squares (class Y(3,3)) on a 10 x 10 grid; noise goes to both
    thin classes and to ten random similar-size classes.
    """
    rng = _rng(seed)
    params = ClassParams(K, d)
    k = params.k
    per_row = math.ceil(planted ** (1 / d))
    if 10 * per_row > K:
        raise ValueError("planted objects do not fit into [0, K]")

    def cell(m):
        return 10 * m, 10 * m + 8

    objs = []
    if d == 1:
        target = ClassId.interval(3)
        for i in range(planted):
            a, b = cell(i)
            objs.append(HyperRect.raw((a,), (b,)))
    elif d == 2:
        target = ClassId.similar((3, 3))
        for i in range(planted):
            (a0, b0), (a1, b1) = cell(i % per_row), cell(i // per_row)
            objs.append(HyperRect.raw((a0, a1), (b0, b1)))
    else:
        raise ValueError("planted_classes supports d = 1 and d = 2")

    def side_in_class(i):
        if i == 0:
            return _frac(rng, 0, 1, den)
        return _frac(rng, mpq(2 ** (i - 1)) + mpq(1, den), 2 ** i, den)

    def place(side):
        a = _frac(rng, 0, K - side, den)
        return a, coord(a + side)

    def noise(y):
        lo, hi = [], []
        for i in y:
            a, b = place(side_in_class(i))
            lo.append(a)
            hi.append(b)
        objs.append(HyperRect.raw(tuple(lo), tuple(hi)))

    if d == 1:
        noise_classes = [(i,) for i in range(k + 1) if i != 3]
    else:
        noise_classes = [(0, int(rng.integers(0, k + 1))), (int(rng.integers(1, k + 1)), 0)]
        ys = set()
        while len(ys) < 10:
            y = (int(rng.integers(1, k + 1)), int(rng.integers(1, k + 1)))
            if y != (3, 3):
                ys.add(y)
        noise_classes += sorted(ys)
    for y in noise_classes:
        for _ in range(int(rng.integers(1, noise_per_class + 1))):
            noise(y)

    inst = Instance(d, objs, declared_K=K,
                    meta={"family": "planted_classes", "planted_class": target,
                          "D": max_cell_containment(objs)})
    verify_planted_classes(inst, noise_per_class)
    return inst


def class_of(h: HyperRect, params: ClassParams) -> ClassId:
    if params.d == 1:
        return ClassId.interval(interval_class(h[1][0] - h[0][0], params))
    return hyperrect_class(h, params)


def verify_planted_classes(inst: Instance, noise_per_class: int) -> None:
    params = ClassParams(inst.declared_K, inst.dim)
    target = inst.meta["planted_class"]
    members: dict = {}
    for h in inst.objects:
        members.setdefault(class_of(h, params), []).append(h)
    for cid, hs in members.items():
        if cid != target and len(hs) > noise_per_class:
            raise InvariantViolation(f"noise class {cid} holds {len(hs)} objects")
    if len(members.get(target, ())) <= noise_per_class:
        raise InvariantViolation("planted class is not dominant")


# Huge coordinates with a planted optimum ---------------------------------------

def gen_huge_coordinates(n: int, t: int, d: int = 1, bits: int = 100, seed=None) -> Instance:
    """``t`` disjoint unit boxes near 2^bits plus n - t boxes each containing one of them.

    Every object contains a planted box, so the t planted boxes' corners pierce
    the whole family and no independent set is larger than t; the planted
    boxes themselves are independent, hence opt = t exactly.  Noise margins
    are drawn at random scales 2^e, e uniform in [0, bits - 1], so all size
    classes up to 2^bits are populated.
    """
    if not 1 <= t <= n:
        raise ValueError("need 1 <= t <= n")
    rng = _rng(seed)
    py = random.Random(int(rng.integers(2 ** 63)))
    base = 1 << bits
    axes = []
    for _ in range(d):
        # distinct multiples of 4 in [base, 2 * base): planted unit sides never touch
        picks = set()
        while len(picks) < t:
            picks.add(base + 4 * py.randrange(base // 4))
        coords = sorted(picks)
        py.shuffle(coords)
        axes.append(coords)
    planted = [HyperRect.raw(tuple(axes[j][i] for j in range(d)),
                             tuple(axes[j][i] + 1 for j in range(d))) for i in range(t)]

    def margin():
        e = py.randrange(bits)
        return py.randrange(1 << e) if py.random() < 0.9 else 0

    objs = list(planted)
    for _ in range(n - t):
        p = planted[py.randrange(t)]
        lo = tuple(v - margin() for v in p[0])
        hi = tuple(v + margin() for v in p[1])
        objs.append(HyperRect.raw(lo, hi))
    inst = Instance(d, objs, declared_K=base << 2, planted_opt=t,
                    meta={"family": "huge_coordinates", "bits": bits})
    verify_huge_coordinates(inst, t)
    return inst


def verify_huge_coordinates(inst: Instance, t: int) -> None:
    planted = sorted(inst.objects[:t], key=lambda p: p[0][0])
    for a, b in zip(planted, planted[1:]):
        if a[1][0] >= b[0][0] and intersects(a, b):
            raise InvariantViolation("planted boxes intersect")
    if inst.dim > 1 and not is_independent_set(planted):
        raise InvariantViolation("planted boxes intersect")
    lows = [p[0][0] for p in planted]
    for h in inst.objects[t:]:
        i = bisect_left(lows, h[0][0])
        j = bisect_right(lows, h[1][0])
        if not any(contains(h, p) for p in planted[i:j]):
            raise InvariantViolation(f"{h!r} contains no planted box")


# Crossing tall and wide rectangles ---------------------------------------------

def gen_cross_fig5(n: int, seed=None) -> Instance:
    """n/2 tall thin rectangles crossed by n/2 short wide ones; opt = n/2."""
    if n < 2 or n % 2:
        raise ValueError("n must be even and >= 2")
    m = n // 2
    tall = [HyperRect.raw((2 * i + 1, 0), (2 * i + 2, 2 * m + 1)) for i in range(m)]
    wide = [HyperRect.raw((0, 2 * i + 1), (2 * m + 1, 2 * i + 2)) for i in range(m)]
    return Instance(2, tall + wide, declared_K=2 * m + 1, planted_opt=m,
                    meta={"family": "cross_fig5"})


# Ellipses -----------------------------------------------------------------------

def gen_ellipses(n: int, d: int = 2, seed=None, extent: int = 64, den: int = 4,
                 min_axis=1, max_axis=4, sigma=None) -> Instance:
    """Random axis-aligned ellipses (sigma-rectangular, sigma just above sqrt(d)).

    A larger ``sigma`` may be requested; it only loosens the declared ratio.
    """
    rng = _rng(seed)
    objs = []
    for _ in range(n):
        a = [_frac(rng, min_axis, max_axis, den) for _ in range(d)]
        c = [_frac(rng, ai, extent - ai, den) for ai in a]
        f = ellipse(c, a)
        if sigma is not None:
            if coord(sigma) < f.sigma:
                raise ValueError(f"ellipses in dimension {d} need sigma >= {f.sigma}")
            f = SigmaObject(f.out_box, f.in_box, coord(sigma), f.shape_tag)
        objs.append(f)
    inst = Instance(d, objs, declared_K=extent, meta={"family": "ellipses"})
    verify_sigma(inst)
    return inst


def verify_sigma(inst: Instance) -> None:
    for f in inst.objects:
        if not isinstance(f, SigmaObject):
            raise InvariantViolation("sigma family holds a plain box")
        if not contains(f.out_box, f.in_box):
            raise InvariantViolation("in-box escapes out-box")
        for j in range(inst.dim):
            if (f.in_box[1][j] - f.in_box[0][j]) * f.sigma < f.out_box[1][j] - f.out_box[0][j]:
                raise InvariantViolation("in-box too thin for sigma")


def discs_disjoint(f: SigmaObject, g: SigmaObject) -> bool:
    """Exact test for two circles (equal semi-axes); strict separation."""
    _, c1, a1 = f.shape_tag
    _, c2, a2 = g.shape_tag
    dist2 = sum((x - y) ** 2 for x, y in zip(c1, c2))
    return dist2 > (a1[0] + a2[0]) ** 2


def gen_ellipse_packing(n: int, d: int = 2, seed=None, extent: int = 12, den: int = 4,
                        max_tries: int = 20000) -> Instance:
    """Up to ``n`` pairwise disjoint circles (d-balls) with radii in [1, 2].

    Disjointness is decided exactly from centres and radii, so the family is
    truly independent while many of the bounding boxes still overlap.
    """
    rng = _rng(seed)
    objs: list = []
    tries = 0
    while len(objs) < n and tries < max_tries:
        tries += 1
        r = _frac(rng, 1, 2, den)
        c = [_frac(rng, r, extent - r, den) for _ in range(d)]
        f = ellipse(c, [r] * d)
        if all(discs_disjoint(f, g) for g in objs):
            objs.append(f)
    inst = Instance(d, objs, declared_K=extent, meta={"family": "ellipse_packing"})
    verify_sigma(inst)
    return inst


def max_out_box_overlaps(objs) -> int:
    """Largest number of other out-boxes meeting one object's out-box."""
    boxes = [f.out_box for f in objs]
    best = 0
    for i, b in enumerate(boxes):
        cnt = sum(1 for j, c in enumerate(boxes) if j != i and intersects(b, c))
        best = max(best, cnt)
    return best


# Spec-driven front end -----------------------------------------------------------

@dataclass
class GeneratorSpec:
    family: str
    n: int = 0
    d: int = 1
    K: int | None = None
    D: int | None = None
    delta: int | None = None
    sigma: str | None = None
    t: int | None = None
    seed: int = 0
    extra: dict = field(default_factory=dict)

    def generate(self) -> Instance:
        if self.family not in _DISPATCH:
            raise ValueError(f"unknown family {self.family!r}; choose from {', '.join(FAMILIES)}")
        return _DISPATCH[self.family](self)


def _need(value, name, family):
    if value is None:
        raise ValueError(f"family {family} needs --{name}")
    return value


_DISPATCH: dict[str, Callable[[GeneratorSpec], Instance]] = {
    "greedy_lb": lambda s: gen_greedy_lb(s.n, s.seed),
    "sparse_bounded": lambda s: gen_sparse_bounded(_need(s.K, "K", s.family), _need(s.D, "D", s.family),
                                                   s.n, s.d, s.seed, **s.extra),
    "similar_size": lambda s: gen_similar_size(_need(s.delta, "delta", s.family), s.d, s.n, s.seed, **s.extra),
    "planted_classes": lambda s: gen_planted_classes(s.d, s.seed, K=s.K or 1024, **s.extra),
    "huge_coordinates": lambda s: gen_huge_coordinates(s.n, _need(s.t, "t", s.family), s.d, seed=s.seed, **s.extra),
    "cross_fig5": lambda s: gen_cross_fig5(s.n, s.seed),
    "ellipses": lambda s: gen_ellipses(s.n, s.d, s.seed, sigma=s.sigma, **s.extra),
    "ellipse_packing": lambda s: gen_ellipse_packing(s.n, s.d, s.seed, **s.extra),
}
