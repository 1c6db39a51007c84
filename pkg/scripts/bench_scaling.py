"""Doubling benchmark for the full interval pipeline.

Streams are generated up front and sizes are timed alternately, keeping the
best of a few repetitions, so allocator warm-up does not bias the ratio.
Each stream is copied in arrival order before timing.

    python3 scripts/bench_scaling.py --sizes 250000,500000,1000000 --reps 2
"""
import argparse
import gc
import math
import time

from rom_mis.generators import gen_huge_coordinates
from rom_mis.harness import arrival_copy, shuffled
from rom_mis.rescale import run_full_intervals


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="250000,500000,1000000")
    ap.add_argument("--reps", type=int, default=2)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    streams = {}
    for n in sizes:
        inst = gen_huge_coordinates(n, math.isqrt(n), seed=args.seed)
        streams[n] = arrival_copy(shuffled(inst.objects, args.seed, 0))
    best = {n: math.inf for n in sizes}
    for _ in range(args.reps):
        for n in sizes:
            gc.collect()
            t0 = time.perf_counter()
            run_full_intervals(streams[n], n)
            best[n] = min(best[n], time.perf_counter() - t0)
    prev = None
    for n in sizes:
        extra = f"  x{best[n] / best[prev]:.2f} vs n = {prev}" if prev else ""
        print(f"n = {n:>9}: {best[n]:7.2f} s  ({1e6 * best[n] / n:.2f} us/object){extra}")
        prev = n


if __name__ == "__main__":
    main()
