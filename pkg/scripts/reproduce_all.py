"""Run every task and write both report formats next to each other.

    python scripts/reproduce_all.py [--config FILE] [--prefix reports/full]
"""

import argparse
import sys
import time
from pathlib import Path

from zerocert.runner import RunConfig, emit_report, run


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--config", type=Path)
    ap.add_argument("--prefix", default="reports/full")
    args = ap.parse_args()
    cfg = RunConfig.from_text(args.config.read_text()) if args.config else RunConfig()
    start = time.perf_counter()
    report = run(cfg)
    elapsed = time.perf_counter() - start
    prefix = Path(args.prefix)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    prefix.with_suffix(".jsonl").write_text(emit_report(report, "records"))
    prefix.with_suffix(".txt").write_text(emit_report(report, "table"))
    failed = report.failures()
    print(f"{len(report.records)} records, {len(failed)} failing, {elapsed:.1f}s")
    for r in failed:
        print(f"  FAIL {r.id}: {r.value} vs {r.paper_value} ({r.tolerance})")
    if report.verdict is not None:
        print("verdict:", "certified" if report.verdict["certified"] else "not certified",
              f"c0 = {report.verdict['c0']:.6g}")
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
