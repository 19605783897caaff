"""Trade-off between gate fault rate and qubit loss rate."""

import argparse
from pathlib import Path

import numpy as np

from purbound.cli import render
from purbound.threshold import loss_tradeoff, max_apex, max_fault_rate


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", type=int, default=54)
    ap.add_argument("--out", type=Path, default=Path("results/loss_tradeoff.csv"))
    args = ap.parse_args()

    q_star = max_apex().q
    grid = list(np.linspace(0.0, q_star, args.points))
    pts = loss_tradeoff(grid, threads=4)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(render(("q_f", "q_l_max", "n_star"), [(x.q_f, x.q_l_max, x.n_star) for x in pts], "csv"))

    for x in pts[:: max(1, len(pts) // 8)]:
        print(f"q_f={x.q_f:.4f}  q_l_max={x.q_l_max:.5f}  n*={x.n_star:.3f}")
    print(f"loss-free intercept q_f={max_fault_rate(0.0)[0]:.5f} (lossless bound {q_star:.5f})")
    print(f"wrote {len(pts)} rows to {args.out}")


if __name__ == "__main__":
    main()
