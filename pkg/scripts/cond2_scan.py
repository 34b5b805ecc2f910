"""Scan the condition-2 regions at a chosen resolution and report where the slack is tightest.

    python scripts/cond2_scan.py --step-t 0.0025 --workers 4
"""

import argparse
import time

from zerocert import cond2


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--step-a", type=float, default=cond2.DEFAULT_STEPS[0])
    ap.add_argument("--step-b", type=float, default=cond2.DEFAULT_STEPS[1])
    ap.add_argument("--step-t", type=float, default=cond2.DEFAULT_STEPS[2])
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    regions = cond2.default_regions((args.step_a, args.step_b, args.step_t))
    for name, region in regions.items():
        t0 = time.perf_counter()
        cert = cond2.verify_region(region, workers=args.workers)
        a, b, t = cert.argmin
        print(f"{name:8s} min slack {cert.min_slack:.6e} at a={a:.4f} b={b:.4f} t={t:.4f}  "
              f"{cert.points_checked} points  {time.perf_counter() - t0:.1f}s  {'ok' if cert.passed else 'FAIL'}")


if __name__ == "__main__":
    main()
