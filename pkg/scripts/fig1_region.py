"""Possibly purifiable region in the (p, q) plane for a few copy numbers n.

Below the apex the boundary is exact (F_q = F_p); beyond it the curve depends on
the labelled adversarial-concentration model and ends at the separability limit.
"""

import argparse
from pathlib import Path

import numpy as np

from purbound.cli import render
from purbound.threshold import ancilla_limit, apex, region_boundary, region_boundary_above


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=float, nargs="+", default=[2.0, 3.0, 5.0])
    ap.add_argument("--points", type=int, default=60, help="samples per branch")
    ap.add_argument("--out", type=Path, default=Path("results/region.csv"))
    args = ap.parse_args()

    rows = []
    limit = ancilla_limit()
    for n in args.n:
        top = apex(n)
        below = region_boundary(n, np.linspace(0.0, top.p, args.points))
        above = region_boundary_above(n, np.linspace(top.p, limit, args.points)[1:])
        rows += [(n, p, q, below.branch) for p, q in below.points]
        rows += [(n, p, q, above.branch) for p, q in above.points]
        q_peak = max(q for _, q in below.points + above.points)
        print(f"n={n:g}: apex (p={top.p:.4f}, q={top.q:.5f}); largest boundary q {q_peak:.5f}")
    print(f"all curves end at p = 1 - 1/sqrt(2) = {limit:.5f}")
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(render(("n", "p", "q", "branch"), rows, "csv"))
    print(f"wrote {len(rows)} rows to {args.out}")


if __name__ == "__main__":
    main()
