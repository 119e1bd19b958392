"""Compare the closed-form minimum ARI with exhaustive search over a grid of sizes.

Example:
    python scripts/oracle_sweep.py --max-size 4 --extra 3
    python scripts/oracle_sweep.py --max-size 5 --zero-one
"""

import argparse
import time

from arimin import min_ari
from arimin.core import format_decimal, format_fraction
from arimin.oracle import EnumerationSpec, brute_force_min_ari


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--max-size", type=int, default=4)
    parser.add_argument("--extra", type=int, default=3, help="scan n up to r + s - 1 + extra")
    parser.add_argument("--zero-one", action="store_true", help="0/1 tables, n up to r*s")
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args()

    header = f"{'r':>2} {'s':>2} {'n_max':>5} {'oracle':>10} {'closed form':>12} {'n at optimum':>14} {'tables':>10}  status"
    print(header)
    print("-" * len(header))
    for r in range(2, args.max_size + 1):
        for s in range(r, args.max_size + 1):
            n_max = r * s if args.zero_one else r + s - 1 + args.extra
            t0 = time.perf_counter()
            res = brute_force_min_ari(EnumerationSpec(r, s, n_max, args.zero_one), workers=args.workers)
            bound = min_ari(r, s)
            status = "match" if res.best_ari == bound else ("BELOW" if res.best_ari < bound else "above")
            at = ",".join(map(str, sorted(res.n_at_optimum)))
            print(
                f"{r:>2} {s:>2} {res.spec.n_max:>5} {format_decimal(res.best_ari, 5):>10} "
                f"{format_decimal(bound, 5):>12} {at:>14} {res.tables_scanned:>10}  {status}"
                f"  ({time.perf_counter() - t0:.2f}s)"
            )
            if res.best_ari < bound:
                print(f"      oracle {format_fraction(res.best_ari)} vs {format_fraction(bound)};"
                      f" e.g. {res.best_tables[0].tolist()}")


if __name__ == "__main__":
    main()
