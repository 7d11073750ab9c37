"""Run every shipped scenario and write one JSON report per scenario.

    python scripts/run_suite.py --out reports/ --jobs 4 [--bound 6]

Exit status is the worst per-scenario exit code.
"""

from __future__ import annotations

import argparse
import pathlib
import sys
import time

from adicwb import cli


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--out", default="reports", help="directory for the JSON reports")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--bound", type=int, default=None)
    args = p.parse_args(argv)
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    worst = cli.EXIT_OK
    for name in cli.DEMOS:
        t = time.perf_counter()
        report, code = cli.run(cli.parse_scenario(cli.demo_text(name)), args.bound, args.jobs)
        (out / f"{name}.json").write_text(cli.dump_report(report), encoding="utf-8")
        s = report["summary"]
        print(f"{name:10s} {s['passed']}/{s['total']} verified, {s['failed']} failed, "
              f"{s['inconclusive']} inconclusive  ({time.perf_counter() - t:.1f}s)")
        worst = max(worst, code)
    return worst


if __name__ == "__main__":
    sys.exit(main())
