"""Greedy on the blocker instance: mean output stays near 2 while opt grows as sqrt(n).

    python3 scripts/greedy_lower_bound.py --sizes 100,1600,10000 --trials 500
"""
import argparse
import statistics

from rom_mis.generators import gen_greedy_lb
from rom_mis.harness import run_trials


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="100,1600,10000")
    ap.add_argument("--trials", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    print(f"{'n':>8} {'opt':>5} {'mean out':>9} {'P[out=opt]':>11}")
    for n in (int(s) for s in args.sizes.split(",")):
        inst = gen_greedy_lb(n)
        stats = run_trials(inst, "greedy", args.trials, args.seed)
        sizes = [s.output_size for s in stats]
        hit = sum(x == inst.planted_opt for x in sizes) / len(sizes)
        print(f"{n:>8} {inst.planted_opt:>5} {statistics.fmean(sizes):>9.3f} {hit:>11.4f}")


if __name__ == "__main__":
    main()
