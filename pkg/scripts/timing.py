"""Wall time of each verification suite per (law, root type) cell.

    python3 scripts/timing.py --types A2 B2 --suites demazure hecke
    python3 scripts/timing.py --types G2 --suites demazure --degree 5
"""
import argparse
import sys
import time

from formalhecke.verify import default_laws, suite_demazure, suite_hecke, suite_law, suite_transport

SUITES = {
    "law": lambda law, tag, d: suite_law(law, d),
    "demazure": suite_demazure,
    "hecke": suite_hecke,
    "transport": lambda law, tag, d: suite_transport(law, tag, d, hecke=True),
}


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--types", nargs="+", default=["A2", "B2"])
    parser.add_argument("--suites", nargs="+", choices=sorted(SUITES), default=["demazure", "hecke", "transport"])
    parser.add_argument("--degree", type=int, default=6)
    parser.add_argument("--per-check", action="store_true", help="also print every check")
    args = parser.parse_args()

    failed = 0
    print(f"{'law':22} {'type':5} {'suite':10} {'checks':>6} {'fail':>4} {'undec':>5} {'seconds':>8}")
    for tag in args.types:
        for law in default_laws():
            for suite in args.suites:
                start = time.perf_counter()
                reports = SUITES[suite](law, tag, args.degree)
                secs = time.perf_counter() - start
                bad = sum(r.status == "fail" for r in reports)
                undecided = sum(r.status == "undecided" for r in reports)
                failed += bad
                print(f"{law.label():22} {tag:5} {suite:10} {len(reports):6d} {bad:4d} {undecided:5d} {secs:8.1f}")
                if args.per_check:
                    for r in reports:
                        print(f"    {r.check:30} {r.status:9} {r.ms:>8} ms")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
