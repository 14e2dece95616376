"""psi and the maximizing triangle density across the transition at fixed e."""
import argparse
import csv
from pathlib import Path

import numpy as np

from ergmlimit.phase import critical_point, detect_jump, phase_scan


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--e", type=float, default=0.5)
    ap.add_argument("--beta2-min", type=float, default=-5.0)
    ap.add_argument("--step", type=float, default=0.05)
    ap.add_argument("--outdir", default="results")
    args = ap.parse_args()
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)

    grid = -np.arange(0, -args.beta2_min / args.step + 1e-9) * args.step
    pts = phase_scan(args.e, grid)
    with open(out / f"phase_scan_e{args.e:g}.csv", "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=["beta2", "psi", "t_star", "eps_star"])
        w.writeheader()
        w.writerows(p.row() for p in pts)
    jump = detect_jump(pts)
    cp = critical_point(args.e)
    print(f"beta2_c = {cp.beta2_c:.6f}")
    print(f"largest jump in t_star: {jump.size:.5f} between beta2 = {jump.beta2_above:.3f} "
          f"and {jump.beta2_below:.3f}; first order: {jump.first_order}")


if __name__ == "__main__":
    main()
