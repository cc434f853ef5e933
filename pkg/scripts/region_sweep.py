"""Achievable frontier of a symmetric Gaussian chain as the relay count grows.

Writes one CSV per node count (frontier vertices) and prints areas and
end-point rates.

    python3 scripts/region_sweep.py --max-nodes 8 --out runs/regions
"""
import argparse
import time
from pathlib import Path

from twrelay.channel import symmetric_gaussian
from twrelay.formats import frontier_csv
from twrelay.region import achievable_region


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-nodes", type=int, default=8)
    ap.add_argument("--gain", type=float, default=1.0)
    ap.add_argument("--power", type=float, default=1.0)
    ap.add_argument("--out", type=Path)
    args = ap.parse_args()
    if args.out:
        args.out.mkdir(parents=True, exist_ok=True)

    print("M  rankings  area      r1_max    rm_max    seconds")
    for m in range(3, args.max_nodes + 1):
        t0 = time.perf_counter()
        union = achievable_region(symmetric_gaussian(m, args.gain, args.power))
        fr = union.frontier
        dt = time.perf_counter() - t0
        print(f"{m:<2} {len(union.members):<9} {union.area():<9.4f} "
              f"{fr.x_max:<9.4f} {fr.ys[0]:<9.4f} {dt:.3f}")
        if args.out:
            (args.out / f"frontier_m{m}.csv").write_text(frontier_csv(fr))


if __name__ == "__main__":
    main()
