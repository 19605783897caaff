"""Gate-error thresholds of recursive BBPSSW and DEJMPS compared with the bound."""

import argparse

from purbound.protocol import NoTransitionError, protocol_threshold
from purbound.threshold import max_apex


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--f0", type=float, nargs="+", default=[0.75, 0.85, 0.95])
    args = ap.parse_args()

    bound = max_apex().q
    print(f"upper bound on tolerable gate error: {bound:.5f}")
    print("f0     noise           protocol  q_crit")
    for f0 in args.f0:
        for model in ("depolarizing", "adversarial-xz"):
            for protocol in ("bbpssw", "dejmps"):
                try:
                    q = protocol_threshold(model, protocol, f0)
                    flag = "" if model != "adversarial-xz" or q <= bound else "  exceeds bound"
                    print(f"{f0:<6} {model:<15} {protocol:<9} {q:.4f}{flag}")
                except NoTransitionError as exc:
                    print(f"{f0:<6} {model:<15} {protocol:<9} none ({exc})")


if __name__ == "__main__":
    main()
