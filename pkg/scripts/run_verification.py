#!/usr/bin/env python3
"""Run every verification suite and write a combined JSON report.

The default configuration finishes in well under a minute; --full bumps
the sample sizes to the acceptance scale (about 10^6 draws per check)
and takes a few minutes.
"""

import argparse
import sys

from kendall_walks.verify import run_verification


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("out", nargs="?", default="verification_report.json",
                        help="report path (default: %(default)s)")
    parser.add_argument("--full", action="store_true",
                        help="acceptance-scale sample sizes")
    args = parser.parse_args()
    config = {"samples": 1_000_000, "paths": 1_000_000} if args.full else None
    report = run_verification("all", config)
    with open(args.out, "w") as fh:
        fh.write(report.to_json(include_timing=True))
    n_pass = sum(c.passed for c in report.checks)
    print(f"{n_pass}/{len(report.checks)} checks passed "
          f"in {report.wall_clock_seconds:.1f}s; report at {args.out}")
    for c in report.checks:
        if not c.passed:
            print(f"  FAIL {c.name}: {c.statistic:.6g} > {c.threshold:.6g}")
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
