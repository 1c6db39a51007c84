"""Random-order trials: shuffle, run, verify, record.

Trial ``i`` of a run with base seed ``s`` shuffles with
``numpy.random.default_rng([s, i])``, so results do not depend on how trials
are spread over worker processes.
"""
from __future__ import annotations

import csv
import io
import statistics
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from functools import partial
from typing import Sequence

import numpy as np

from .bounded_rom import (BoundedHyperrectRunner, BoundedInstanceMeta, BoundedIntervalRunner,
                          exact_interval_opt, max_cell_containment)
from .errors import DimensionMismatch, InvariantViolation
from .geometry import HyperRect, Instance, bounding_box, check_independent
from .greedy import greedy_run
from .oracle import BRUTE_FORCE_LIMIT, brute_force_mis
from .rescale import FullPipeline, SigmaPipeline, gaps_event_holds, scaled_box_side

ALGOS = ("greedy", "bounded", "full", "sigma")
CSV_HEADER = "# rom-mis csv v1"


@dataclass
class TrialStats:
    trial: int
    seed: int
    algo: str
    n: int
    output_size: int
    opt_or_bound: int | None
    opt_kind: str
    ratio: float | None
    independence_ok: bool = True
    nonempty_ok: bool = True
    observation_selections: int = 0
    gaps_event: bool | None = None
    chosen_class: str = ""
    F_count: int | None = None
    scaled_K: int | None = None
    scaled_D: int | None = None
    fallback_used: bool = False
    wall_time: float = 0.0


@dataclass
class TrialConfig:
    """Per-run switches.  ``scaled_stats`` traces the rescaled stream (slower)."""

    scaled_stats: bool = False
    greedy_checker: str = "auto"
    check_independence: bool = True


def shuffled(objs: Sequence, base_seed: int, trial: int) -> list:
    perm = np.random.default_rng([base_seed, trial]).permutation(len(objs))
    return [objs[i] for i in perm]


def arrival_copy(stream: Sequence[HyperRect]) -> list:
    """Fresh copies of the boxes, allocated in arrival order.

    A shuffled list still points at objects laid out in generation order, so
    reading it hops around the heap.  Objects received from a real stream sit
    in memory in the order they came in; timing runs use this copy.
    """
    return [HyperRect.raw(tuple(v + 0 for v in h[0]), tuple(v + 0 for v in h[1])) for h in stream]


def reference_opt(instance: Instance) -> tuple:
    """(value, kind): the planted optimum, an exact optimum, or (None, 'none')."""
    if instance.planted_opt is not None:
        return instance.planted_opt, "planted"
    boxes = instance.boxes()
    if instance.dim == 1 and not instance.is_sigma:
        return exact_interval_opt(boxes)[0], "exact"
    if instance.n <= BRUTE_FORCE_LIMIT and not instance.is_sigma:
        return brute_force_mis(boxes)[0], "exact"
    return None, "none"


def bounded_meta(instance: Instance) -> BoundedInstanceMeta:
    boxes = instance.boxes()
    K = instance.declared_K
    if K is None:
        K = max(max(bounding_box(boxes)[1]), 1) if boxes else 1
    return BoundedInstanceMeta(n=instance.n, K=K, D=max_cell_containment(boxes), d=instance.dim)


def _run_one(instance: Instance, algo: str, base_seed: int, opt, opt_kind: str,
             meta: BoundedInstanceMeta | None, cfg: TrialConfig, trial: int) -> TrialStats:
    stream = shuffled(instance.objects, base_seed, trial)
    n = instance.n
    d = instance.dim
    extra: dict = {}
    t0 = time.perf_counter()
    if algo == "greedy":
        checker = cfg.greedy_checker
        if checker == "auto" and d > 1:
            checker = "naive"
        out = greedy_run(stream, checker=checker, dim=d)
        obs = 0
    elif algo == "bounded":
        runner_cls = BoundedIntervalRunner if d == 1 else BoundedHyperrectRunner
        runner = runner_cls(meta)
        out = runner.run(stream)
        obs = runner.observation_selections
        extra.update(chosen_class=str(runner.chosen_class), fallback_used=runner.fallback_used)
    elif algo == "full":
        pipe = FullPipeline(n, d, "intervals" if d == 1 else "hyperrects", trace=cfg.scaled_stats)
        out = pipe.run(stream)
        obs = pipe.observation_selections
        extra.update(chosen_class=str(pipe.chosen_class), fallback_used=pipe.fallback_used,
                     F_count=pipe.ignored_count)
        if cfg.scaled_stats:
            extra.update(scaled_K=scaled_box_side(n), scaled_D=pipe.scaled_density())
    elif algo == "sigma":
        pipe = SigmaPipeline(n, d, trace=cfg.scaled_stats)
        out = pipe.run(stream)
        inner = pipe.box_pipeline
        obs = inner.observation_selections
        extra.update(chosen_class=str(inner.chosen_class), fallback_used=inner.fallback_used,
                     F_count=inner.ignored_count)
    else:
        raise ValueError(f"unknown algorithm {algo!r}")
    wall = time.perf_counter() - t0

    boxes = [f.out_box for f in out] if instance.is_sigma else out
    independent = check_independent(boxes) if cfg.check_independence else True
    if not independent:
        raise InvariantViolation(f"trial {trial}: {algo} returned intersecting objects")
    if obs:
        raise InvariantViolation(f"trial {trial}: {algo} selected {obs} objects before its action phase")
    nonempty = n < 2 or len(out) > 0
    if not nonempty:
        raise InvariantViolation(f"trial {trial}: {algo} returned nothing for n = {n}")
    if algo in ("full", "sigma") and n >= 2:
        extra["gaps_event"] = gaps_event_holds([f.out_box for f in stream] if instance.is_sigma else stream)

    ratio = None
    if opt is not None and out:
        ratio = opt / len(out)
    return TrialStats(trial=trial, seed=base_seed, algo=algo, n=n, output_size=len(out),
                      opt_or_bound=opt, opt_kind=opt_kind, ratio=ratio,
                      independence_ok=independent, nonempty_ok=nonempty,
                      observation_selections=obs, wall_time=wall, **extra)


def run_trials(instance: Instance, algo: str, trials: int, base_seed: int = 0,
               parallelism: int = 1, config: TrialConfig | None = None) -> list:
    """Run ``trials`` independent random orders; results come back in trial order."""
    if algo not in ALGOS:
        raise ValueError(f"unknown algorithm {algo!r}; choose from {', '.join(ALGOS)}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if algo == "sigma" and not instance.is_sigma:
        raise DimensionMismatch("algo sigma needs an instance of sigma-rectangular objects")
    if algo != "sigma" and instance.is_sigma:
        raise DimensionMismatch(f"algo {algo} needs plain boxes; use sigma for this instance")
    cfg = config or TrialConfig()
    opt, opt_kind = reference_opt(instance)
    meta = bounded_meta(instance) if algo == "bounded" else None
    job = partial(_run_one, instance, algo, base_seed, opt, opt_kind, meta, cfg)
    if parallelism <= 1 or trials == 1:
        return [job(i) for i in range(trials)]
    with ProcessPoolExecutor(max_workers=parallelism) as pool:
        chunk = max(1, trials // (4 * parallelism))
        return list(pool.map(job, range(trials), chunksize=chunk))


def _quantiles(xs: list) -> dict:
    xs = sorted(xs)
    if not xs:
        return {"mean": None, "median": None, "q10": None, "q90": None, "min": None, "max": None}
    q = np.quantile(np.asarray(xs, dtype=float), [0.1, 0.9])
    return {"mean": statistics.fmean(xs), "median": statistics.median(xs),
            "q10": float(q[0]), "q90": float(q[1]), "min": xs[0], "max": xs[-1]}


@dataclass
class Aggregate:
    trials: int
    output_size: dict
    ratio: dict
    gaps_event_rate: float | None
    nonempty_rate: float
    chosen_classes: dict = field(default_factory=dict)


def aggregate(stats: Sequence[TrialStats]) -> Aggregate:
    """Order-independent summary of a batch of trials."""
    sizes = [s.output_size for s in stats]
    ratios = [s.ratio for s in stats if s.ratio is not None]
    gaps = [s.gaps_event for s in stats if s.gaps_event is not None]
    classes = Counter(s.chosen_class for s in stats if s.chosen_class)
    return Aggregate(
        trials=len(stats),
        output_size=_quantiles(sizes),
        ratio=_quantiles(ratios),
        gaps_event_rate=(sum(gaps) / len(gaps)) if gaps else None,
        nonempty_rate=sum(s.nonempty_ok for s in stats) / len(stats) if stats else 0.0,
        chosen_classes=dict(sorted(classes.items())),
    )


def csv_columns(include_wall_time: bool = False) -> list:
    cols = [f.name for f in fields(TrialStats)]
    if not include_wall_time:
        cols.remove("wall_time")
    return cols


def format_csv(stats: Sequence[TrialStats], include_wall_time: bool = False) -> str:
    """Tidy CSV.  ``ratio`` is opt/output when ``opt_kind`` is exact or planted."""
    cols = csv_columns(include_wall_time)
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    w = csv.DictWriter(buf, fieldnames=cols, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for s in stats:
        row = asdict(s)
        if row["ratio"] is not None:
            row["ratio"] = repr(row["ratio"])
        w.writerow(row)
    return buf.getvalue()


def write_csv(stats: Sequence[TrialStats], path, include_wall_time: bool = False) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(format_csv(stats, include_wall_time))


def read_csv(path) -> list:
    with open(path, newline="") as fh:
        first = fh.readline().rstrip("\n")
        if first != CSV_HEADER:
            raise ValueError(f"not a rom-mis csv file (first line {first!r})")
        return list(csv.DictReader(fh))
