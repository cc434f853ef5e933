"""Gap between the ranked achievable region and the outer bounds on random channels.

    python3 scripts/bounds_gap_sweep.py --count 50 --seed 3
"""
import argparse
import statistics

import numpy as np

from twrelay.channel import random_gaussian
from twrelay.region import bounds_report


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--count", type=int, default=50)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--nodes", type=int, nargs="+", default=[3, 4, 5, 6])
    ap.add_argument("--path-universe", choices=("canonical", "all"), default="all")
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    rows = {m: [] for m in args.nodes}
    in_cd = 0
    for _ in range(args.count):
        m = int(rng.choice(args.nodes))
        rep = bounds_report(random_gaussian(m, rng), args.path_universe)
        assert rep["achievable_in_cutset"], rep
        in_cd += rep["achievable_in_cd"]
        rows[m].append(rep["achievable_area"] / rep["cutset_area"])

    print("M  n    mean area ratio (achievable / cut-set)  min")
    for m, ratios in rows.items():
        if ratios:
            print(f"{m:<2} {len(ratios):<4} {statistics.mean(ratios):<40.4f} {min(ratios):.4f}")
    print(f"achievable inside decode-forward outer region: {in_cd}/{args.count}")


if __name__ == "__main__":
    main()
