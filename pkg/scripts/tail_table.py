"""Empirical P_u deviation tails next to the asymptotic bound.

    python scripts/tail_table.py --degrees 8 16 32 --trials 20000
"""

import argparse

from strongcolor.concentration import TAIL_TABLE_HEADER, tail_table


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--degrees", type=int, nargs="+", default=[8, 16, 32])
    ap.add_argument("--trials", type=int, default=20_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    print(",".join(TAIL_TABLE_HEADER))
    for row in tail_table(args.degrees, trials=args.trials, master_seed=args.seed):
        print(",".join(f"{x:.6g}" if isinstance(x, float) else str(x) for x in row))


if __name__ == "__main__":
    main()
