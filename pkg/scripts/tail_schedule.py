"""Print the zero schedule and the step majorant behind each per-class tail bound."""

import argparse

from zerocert import cases
from zerocert.density import build_zero_schedule, default_x_grid


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--case", type=int, choices=sorted(cases.TAIL_CASES), default=1)
    ap.add_argument("--split", type=float, default=cases.LAMBDA0)
    ap.add_argument("--band-step", type=float, default=0.1)
    args = ap.parse_args()

    spec = cases.TAIL_CASES[args.case]
    sched = build_zero_schedule(spec.lambda0, default_x_grid())
    print(f"case {spec.id}: lambda0 = {spec.lambda0:.6g}, cut = {spec.Lambda_tail_cut}")
    for N, lam in sched.bounds.items():
        x = sched.scales[N]
        print(f"  N = {N:3d}  lambda_N >= {lam:.4f}" + (f"  (x = {x})" if x is not None else ""))
    tb = cases.b_max_breakdown(args.case, args.split, band_step=args.band_step)
    print("pieces (lo, hi, count):")
    for lo, hi, n in tb.pieces:
        print(f"  [{lo:.4f}, {hi:.4f})  {n}")
    print(f"below schedule top {tb.below_schedule:.6f}  bands {tb.bands:.6f}  tail {tb.tail:.6f}")
    print(f"total {tb.total:.6f}")


if __name__ == "__main__":
    main()
