"""Apex curve: (p, q) at which n-copy combination is exactly break-even, over real n.

Writes a CSV of the curve and reports the integer apexes and the overall maximum.
"""

import argparse
from pathlib import Path

from purbound.cli import render
from purbound.threshold import apex, apex_scan, max_apex


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-min", type=float, default=1.2)
    ap.add_argument("--n-max", type=float, default=10.0)
    ap.add_argument("--step", type=float, default=0.01)
    ap.add_argument("--out", type=Path, default=Path("results/apex_curve.csv"))
    args = ap.parse_args()

    points = apex_scan(args.n_min, args.n_max, args.step, threads=4)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(render(("n", "p", "q", "f_star"), [(a.n, a.p, a.q, a.f_star) for a in points], "csv"))

    for n in range(2, 7):
        a = apex(n)
        print(f"{n}-apex: p={a.p:.4f} q={a.q:.5f} F*={a.f_star:.5f}")
    best = max_apex()
    print(f"maximum: n*={best.n:.4f} p*={best.p:.4f} q*={best.q:.5f} (residual {best.residual_max:.1e})")
    print(f"wrote {len(points)} rows to {args.out}")


if __name__ == "__main__":
    main()
