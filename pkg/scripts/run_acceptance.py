"""Run the acceptance suite and print one PASS/FAIL line per criterion.

    python3 scripts/run_acceptance.py           # everything, including the G2 cells
    python3 scripts/run_acceptance.py --fast    # skip tests marked slow
"""
import argparse
import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--fast", action="store_true", help="deselect tests marked slow")
    parser.add_argument("pytest_args", nargs="*", help="extra arguments passed to pytest")
    args = parser.parse_args()
    argv = [str(ROOT / "tests" / "test_acceptance.py"), "-q", "-p", "no:cacheprovider"]
    if args.fast:
        argv += ["-m", "not slow"]
    return int(pytest.main(argv + args.pytest_args))


if __name__ == "__main__":
    sys.exit(main())
