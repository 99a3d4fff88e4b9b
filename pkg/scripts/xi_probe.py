"""Collect membership evidence for the two xi sums of G2 across laws and degrees.

Each row reports whether the fraction sum lies in the formal group algebra at
the requested degree.  The outcome is evidence only; nothing is asserted.

    python3 scripts/xi_probe.py --degrees 3 4 5 --out xi.json
"""
import argparse
import json
import sys

from formalhecke.fgl import LawSpec
from formalhecke.verify import probe_xi_membership

LAWS = {
    "multiplicative": LawSpec.make("multiplicative"),
    "lorentz": LawSpec.make("lorentz"),
    "elliptic": LawSpec.make("elliptic"),
    "elliptic_a3_0": LawSpec.make("elliptic", a3="0"),
    "universal": LawSpec.make("universal", terms=4),
}


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--laws", nargs="+", choices=sorted(LAWS), default=sorted(LAWS))
    parser.add_argument("--degrees", nargs="+", type=int, default=[5])
    parser.add_argument("--out", help="write the rows as JSON to this file")
    args = parser.parse_args()

    rows = []
    for name in args.laws:
        for degree in args.degrees:
            rep = probe_xi_membership(LAWS[name], degree)
            row = {"law": name, "degree": degree, "status": rep.status, "ms": rep.ms}
            for key in ("xi_ij", "xi_ji"):
                row[key] = rep.witness.get(key, {}).get("outcome", "undecided")
            rows.append({**row, "witness": rep.witness})
            print(f"{name:16} degree={degree}  xi_ij={row['xi_ij']:10} xi_ji={row['xi_ji']:10} {rep.ms:>8} ms")
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(rows, fh, indent=1, sort_keys=True)
    return 0


if __name__ == "__main__":
    sys.exit(main())
