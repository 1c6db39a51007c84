"""Compare greedy, the bounded runner and the full pipeline on planted huge-coordinate instances.

    python3 scripts/competitiveness.py --n 4096 --t 64 --d 1 --trials 50
"""
import argparse

from rom_mis.generators import gen_huge_coordinates
from rom_mis.harness import aggregate, run_trials, write_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=4096)
    ap.add_argument("--t", type=int, default=64)
    ap.add_argument("--d", type=int, default=1)
    ap.add_argument("--trials", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--algos", default="greedy,bounded,full")
    ap.add_argument("--csv", help="optional prefix; writes <prefix>_<algo>.csv")
    args = ap.parse_args()

    inst = gen_huge_coordinates(args.n, args.t, d=args.d, seed=args.seed)
    print(f"n = {args.n}, d = {args.d}, planted opt = {inst.planted_opt}")
    for algo in args.algos.split(","):
        stats = run_trials(inst, algo, args.trials, args.seed)
        agg = aggregate(stats)
        r, o = agg.ratio, agg.output_size
        print(f"{algo:>8}: output median {o['median']} (q10 {o['q10']:.1f}, q90 {o['q90']:.1f}), "
              f"ratio median {r['median']:.2f}, worst {r['max']:.2f}")
        if agg.gaps_event_rate is not None:
            print(f"{'':>10}gaps event rate {agg.gaps_event_rate:.3f}")
        if args.csv:
            write_csv(stats, f"{args.csv}_{algo}.csv")


if __name__ == "__main__":
    main()
