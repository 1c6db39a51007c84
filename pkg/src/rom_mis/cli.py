"""Command line front end: ``rom-mis gen|run|oracle|bench``.

Exit status: 0 on success, 2 when a correctness check fails, 1 on bad usage.
``ROM_MIS_THREADS`` overrides ``--parallel``.
"""
from __future__ import annotations

import argparse
import csv
import math
import os
import sys
import time

from . import fileformat
from .errors import InvariantViolation
from .generators import FAMILIES, GeneratorSpec, gen_huge_coordinates
from .harness import ALGOS, TrialConfig, aggregate, arrival_copy, run_trials, shuffled, write_csv
from .oracle import brute_force_mis

EXIT_OK, EXIT_USAGE, EXIT_ASSERT = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="rom-mis", description="Random-order online independent set experiments")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="generate an instance file")
    g.add_argument("--family", required=True, choices=FAMILIES)
    g.add_argument("--n", type=int, default=0)
    g.add_argument("--d", type=int, default=1)
    g.add_argument("--K", type=int)
    g.add_argument("--D", type=int)
    g.add_argument("--delta", type=int)
    g.add_argument("--sigma")
    g.add_argument("--t", type=int)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)

    r = sub.add_parser("run", help="run random-order trials on an instance file")
    r.add_argument("--algo", required=True, choices=ALGOS)
    r.add_argument("--instance", required=True)
    r.add_argument("--trials", type=int, default=10)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--parallel", type=int, default=1)
    r.add_argument("--out", required=True)
    r.add_argument("--scaled-stats", action="store_true", help="record scaled_K / scaled_D (slower)")
    r.add_argument("--wall-time", action="store_true", help="add a wall_time column (not reproducible)")

    o = sub.add_parser("oracle", help="solve an instance exactly (at most 24 objects)")
    o.add_argument("--instance", required=True)

    b = sub.add_parser("bench", help="time one run per size on huge-coordinate instances")
    b.add_argument("--algo", required=True, choices=ALGOS[:3])
    b.add_argument("--sizes", required=True)
    b.add_argument("--d", type=int, default=1)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--out", required=True)
    return p


def _threads(requested: int) -> int:
    env = os.environ.get("ROM_MIS_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise SystemExit(f"ROM_MIS_THREADS must be an integer, got {env!r}")
    return max(1, requested)


def cmd_gen(a) -> int:
    spec = GeneratorSpec(family=a.family, n=a.n, d=a.d, K=a.K, D=a.D, delta=a.delta,
                         sigma=a.sigma, t=a.t, seed=a.seed)
    inst = spec.generate()
    fileformat.save_instance(inst, a.out)
    print(f"wrote {inst.n} objects (d = {inst.dim}) to {a.out}")
    return EXIT_OK


def cmd_run(a) -> int:
    inst = fileformat.read_instance(a.instance)
    cfg = TrialConfig(scaled_stats=a.scaled_stats)
    stats = run_trials(inst, a.algo, a.trials, a.seed, _threads(a.parallel), cfg)
    write_csv(stats, a.out, include_wall_time=a.wall_time)
    agg = aggregate(stats)
    print(f"{a.algo}: {agg.trials} trials, mean output {agg.output_size['mean']:.3f}, "
          f"median ratio {agg.ratio['median']}")
    return EXIT_OK


def cmd_oracle(a) -> int:
    inst = fileformat.read_instance(a.instance)
    size, witness = brute_force_mis(inst.boxes())
    print(size)
    for h in witness:
        print(" ".join(f"{lo} {hi}" for lo, hi in zip(h[0], h[1])))
    return EXIT_OK


def cmd_bench(a) -> int:
    from .greedy import greedy_run
    from .rescale import FullPipeline
    from .harness import bounded_meta
    from .bounded_rom import BoundedHyperrectRunner, BoundedIntervalRunner

    try:
        sizes = [int(s) for s in a.sizes.split(",") if s.strip()]
    except ValueError:
        raise _UsageError(f"--sizes must be a comma separated list of integers, got {a.sizes!r}")
    rows = []
    for n in sizes:
        inst = gen_huge_coordinates(n, max(1, math.isqrt(n)), a.d, seed=a.seed)
        stream = arrival_copy(shuffled(inst.objects, a.seed, 0))
        t0 = time.perf_counter()
        if a.algo == "greedy":
            out = greedy_run(stream, checker="auto" if a.d == 1 else "naive", dim=a.d)
        elif a.algo == "bounded":
            runner = (BoundedIntervalRunner if a.d == 1 else BoundedHyperrectRunner)(bounded_meta(inst))
            out = runner.run(stream)
        else:
            out = FullPipeline(n, a.d, "intervals" if a.d == 1 else "hyperrects").run(stream)
        secs = time.perf_counter() - t0
        rows.append({"algo": a.algo, "n": n, "d": a.d, "output_size": len(out), "seconds": f"{secs:.4f}"})
        print(f"n = {n}: {secs:.3f} s")
    with open(a.out, "w", newline="") as fh:
        fh.write("# rom-mis bench v1\n")
        w = csv.DictWriter(fh, fieldnames=list(rows[0]) if rows else ["algo", "n"], lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    return EXIT_OK


class _UsageError(Exception):
    pass


COMMANDS = {"gen": cmd_gen, "run": cmd_run, "oracle": cmd_oracle, "bench": cmd_bench}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.cmd](args)
    except (InvariantViolation, AssertionError) as exc:
        print(f"rom-mis: check failed: {exc}", file=sys.stderr)
        return EXIT_ASSERT
    except (_UsageError, ValueError, TypeError, OSError) as exc:
        print(f"rom-mis: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
