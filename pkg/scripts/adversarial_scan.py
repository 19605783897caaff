"""Locate the most damaging one-sided unitary fault for a range of inputs."""

import argparse

from purbound.adversarial import axis_distance_to_coordinate, pauli_flip_eofs, worst_unitary_search
from purbound.bell import BellDiagonal


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--steps", type=int, default=32)
    args = ap.parse_args()

    for f in (0.6, 0.75, 0.9, 0.99):
        r = 1.0 - f
        state = BellDiagonal(f, 0.6 * r, 0.3 * r, 0.1 * r)
        for p in (0.05, 0.1, 0.3):
            w = worst_unitary_search(state, p, args.steps, args.steps)
            best_pauli = min(pauli_flip_eofs(state, p).values())
            print(
                f"F={f:<5} p={p:<5} theta={w.theta:.4f} axis-offset={axis_distance_to_coordinate(w.unitary.axis):.2e} "
                f"eof={w.eof:.6f} best Pauli eof={best_pauli:.6f} ties={w.ties}"
            )


if __name__ == "__main__":
    main()
