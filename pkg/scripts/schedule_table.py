"""Print hop, encoding and decoding delays plus the first blocks of a schedule.

    python3 scripts/schedule_table.py "(4,2,1,3)" --blocks 10
"""
import argparse

from twrelay.ranking import RankAssignment, ValidPairing
from twrelay.schedule import (THRESHOLD_MODES, DelayTable, build_schedule,
                              pipeline_latency, verify_causality)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("ranking")
    ap.add_argument("--blocks", type=int, default=12)
    ap.add_argument("--threshold-mode", choices=THRESHOLD_MODES, default="strict_self")
    args = ap.parse_args()

    pairing = ValidPairing.canonical(RankAssignment.parse(args.ranking).ranks)
    t = DelayTable.for_pairing(pairing, args.threshold_mode)
    for name, table in (("f", t.f), ("d", t.d), ("dtilde", t.dtilde)):
        print(name.ljust(7), "  ".join(f"{i},{s}:{v}" for (i, s), v in table.items()))
    print("latency", pipeline_latency(pairing, args.threshold_mode).per_source)

    blocks = max(args.blocks, max(t.d.values()))
    sched = build_schedule(pairing, blocks, t.dtilde, t.d)
    m = pairing.node_count
    print("\nblock " + " ".join(f"node{i:<8}" for i in range(1, m + 1)))
    for b in range(1, args.blocks + 1):
        cells = []
        for i in range(1, m + 1):
            w1, wm = sched.entries[(b, i)]
            cells.append(f"({'-' if w1 is None else w1},{'-' if wm is None else wm})".ljust(12))
        print(f"{b:<5} " + " ".join(cells))
    print("\ncausality:", "ok" if verify_causality(sched, t.d, t.dtilde).ok else "violated")


if __name__ == "__main__":
    main()
