"""Ground truth for small instances, plus samplers for the concentration and gap statistics."""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np

from .geometry import HyperRect, intersects

BRUTE_FORCE_LIMIT = 24


def _adjacency(objs: Sequence[HyperRect]) -> list:
    n = len(objs)
    adj = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if intersects(objs[i], objs[j]):
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    return adj


def brute_force_mis(objs: Sequence[HyperRect]) -> tuple:
    """Exact maximum independent set by branch and bound over vertex bitmasks.

    Branches on a vertex of maximum remaining degree (take it or drop it);
    a vertex with no remaining neighbours is always taken.  Prunes when the
    current size plus the remaining vertex count cannot beat the incumbent,
    which starts from a greedy solution.
    """
    objs = list(objs)
    n = len(objs)
    if n > BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute force is limited to {BRUTE_FORCE_LIMIT} objects, got {n}")
    if n == 0:
        return 0, []
    adj = _adjacency(objs)

    # greedy incumbent in order of increasing degree
    order = sorted(range(n), key=lambda v: bin(adj[v]).count("1"))
    inc, blocked = 0, 0
    for v in order:
        if not blocked >> v & 1:
            inc |= 1 << v
            blocked |= adj[v] | (1 << v)
    best = [bin(inc).count("1"), inc]

    def search(remaining: int, chosen: int, size: int) -> None:
        while remaining:
            # take every isolated vertex for free
            pick, pick_deg = -1, -1
            isolated = 0
            r = remaining
            while r:
                low = r & -r
                v = low.bit_length() - 1
                r ^= low
                deg = bin(adj[v] & remaining).count("1")
                if deg == 0:
                    isolated |= low
                elif deg > pick_deg:
                    pick, pick_deg = v, deg
            if isolated:
                chosen |= isolated
                size += bin(isolated).count("1")
                remaining &= ~isolated
                continue
            if size + bin(remaining).count("1") <= best[0]:
                return
            bit = 1 << pick
            search(remaining & ~adj[pick] & ~bit, chosen | bit, size + 1)
            remaining &= ~bit
            if size + bin(remaining).count("1") <= best[0]:
                return
        if size > best[0]:
            best[0], best[1] = size, chosen

    search((1 << n) - 1, 0, 0)
    witness = [objs[v] for v in range(n) if best[1] >> v & 1]
    return best[0], witness


# Uniform subsets and hypergeometric draws ------------------------------------

def random_subset(n: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform ``size``-subset of {1, ..., n}, sorted."""
    if not 0 <= size <= n:
        raise ValueError(f"cannot draw {size} of {n}")
    return np.sort(rng.permutation(n)[:size] + 1)


def sample_hypergeometric(N: int, M: int, n_samples: int, rng: np.random.Generator) -> int:
    """Red balls among ``n_samples`` drawn without replacement; balls 0..M-1 are red.

    Partial Fisher-Yates over an index array, so the law is exactly
    hypergeometric.
    """
    if not (0 <= M <= N and 0 <= n_samples <= N):
        raise ValueError(f"need 0 <= M <= N and 0 <= n <= N, got N={N} M={M} n={n_samples}")
    pool = list(range(N))
    red = 0
    for i in range(n_samples):
        j = i + int(rng.integers(N - i))
        pool[i], pool[j] = pool[j], pool[i]
        if pool[i] < M:
            red += 1
    return red


def sample_hypergeometric_many(N: int, M: int, n_samples: int, draws: int,
                               rng: np.random.Generator) -> np.ndarray:
    if not (0 <= M <= N and 0 <= n_samples <= N):
        raise ValueError(f"need 0 <= M <= N and 0 <= n <= N, got N={N} M={M} n={n_samples}")
    if M == 0 or n_samples == 0:
        return np.zeros(draws, dtype=np.int64)
    if M == N:
        return np.full(draws, n_samples, dtype=np.int64)
    return rng.hypergeometric(M, N - M, n_samples, size=draws)


@dataclass
class TailBoundReport:
    N: int
    M: int
    n_samples: int
    delta: float
    draws: int
    empirical_upper_tail: float
    empirical_lower_tail: float
    bound_upper: float
    bound_lower: float

    @property
    def p(self) -> float:
        return self.M / self.N

    @staticmethod
    def _slack(bound: float, draws: int) -> float:
        return 3 * math.sqrt(bound * (1 - bound) / draws)

    @property
    def upper_ok(self) -> bool:
        return self.empirical_upper_tail <= self.bound_upper + self._slack(self.bound_upper, self.draws)

    @property
    def lower_ok(self) -> bool:
        return self.empirical_lower_tail <= self.bound_lower + self._slack(self.bound_lower, self.draws)

    @property
    def ok(self) -> bool:
        return self.upper_ok and self.lower_ok


def tail_thresholds(N: int, M: int, n_samples: int, delta) -> tuple:
    """Integer cut-offs: X >= hi  iff  X >= (1+delta)pn;  X <= lo  iff  X <= (1-delta)pn."""
    d = Fraction(str(delta))
    mean = Fraction(M * n_samples, N)
    hi = math.ceil((1 + d) * mean)
    lo = math.floor((1 - d) * mean)
    return hi, lo


def hypergeometric_tail_report(N: int, M: int, n_samples: int, delta, draws: int,
                               rng: np.random.Generator) -> TailBoundReport:
    if not 0 <= float(delta) <= 1:
        raise ValueError("delta must lie in [0, 1]")
    xs = sample_hypergeometric_many(N, M, n_samples, draws, rng)
    hi, lo = tail_thresholds(N, M, n_samples, delta)
    pn = M * n_samples / N
    dd = float(delta) ** 2
    return TailBoundReport(
        N=N, M=M, n_samples=n_samples, delta=float(delta), draws=draws,
        empirical_upper_tail=float(np.mean(xs >= hi)),
        empirical_lower_tail=float(np.mean(xs <= lo)),
        bound_upper=math.exp(-dd * pn / 3),
        bound_lower=math.exp(-dd * pn / 2),
    )


# Gaps left by a uniform half-subset ----------------------------------------

def gap_bound(n: int) -> int:
    return 4 * max(0, (n - 1).bit_length())


def max_gap(T: Sequence[int], n: int) -> int:
    """Largest difference between consecutive entries of 1, sorted(T), n."""
    marks = [1] + sorted(int(t) for t in T) + [n]
    return max(b - a for a, b in zip(marks, marks[1:]))


def sample_max_gap(n: int, rng: np.random.Generator) -> int:
    if n < 2:
        raise ValueError("n must be at least 2")
    return max_gap(random_subset(n, -(-n // 2), rng), n)


def sample_max_gaps(n: int, draws: int, rng: np.random.Generator) -> np.ndarray:
    """Vectorised ``sample_max_gap``: one row of ranks per draw."""
    if n < 2:
        raise ValueError("n must be at least 2")
    half = -(-n // 2)
    keys = rng.random((draws, n))
    T = np.sort(np.argpartition(keys, half - 1, axis=1)[:, :half] + 1, axis=1)
    ones = np.ones((draws, 1), dtype=T.dtype)
    marks = np.hstack([ones, T, ones * n])
    return np.diff(marks, axis=1).max(axis=1)


def exact_max_gap_distribution(n: int) -> dict:
    """Exact law of the max gap over all C(n, ceil(n/2)) subsets, as Fractions."""
    if n < 2:
        raise ValueError("n must be at least 2")
    half = -(-n // 2)
    counts = Counter(max_gap(T, n) for T in combinations(range(1, n + 1), half))
    total = math.comb(n, half)
    return {g: Fraction(c, total) for g, c in sorted(counts.items())}
