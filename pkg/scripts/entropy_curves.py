"""s(e, t) curves: the e = 1/2 closed form with its support line, and numeric curves for e < 1/2.

    python scripts/entropy_curves.py --outdir results
"""
import argparse
import csv
import time
from pathlib import Path

import numpy as np

from ergmlimit.phase import critical_point
from ergmlimit.variational import s_curve

HEADER = ["e", "t", "s", "c", "p11", "p12", "p22"]


def write(path, rows, header):
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=header, extrasaction="ignore")
        w.writeheader()
        w.writerows(rows)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--outdir", default="results")
    ap.add_argument("--steps", type=int, default=200)
    ap.add_argument("--e-values", type=float, nargs="*", default=[0.2, 0.3, 0.4, 0.45])
    args = ap.parse_args()
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)

    # closed form on e = 1/2, plus the support line through the ER endpoint
    ts = np.linspace(0, 0.125, args.steps + 1)
    cp = critical_point(0.5)
    rows = []
    for p in s_curve(0.5, ts):
        r = p.row()
        r["support_line"] = float(np.log(2) / 2 - cp.beta2_c * (p.t - 0.125))
        rows.append(r)
    write(out / "s_curve_half.csv", rows, HEADER + ["support_line"])
    print(f"e=0.5: beta2_c={cp.beta2_c:.6f} t_c={cp.t_c:.6f} eps_c={cp.eps_c:.6f}")

    rows = []
    for e in args.e_values:
        t0 = time.perf_counter()
        pts = s_curve(e, np.linspace(0, e**3, 41))
        rows += [p.row() for p in pts]
        print(f"e={e}: {len(pts)} points in {time.perf_counter() - t0:.1f}s")
    write(out / "s_curves_numeric.csv", rows, HEADER)


if __name__ == "__main__":
    main()
