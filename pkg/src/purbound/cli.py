"""Command-line front end: every computation as a subcommand emitting CSV or JSON.

Exit codes: 0 success, 2 numerical failure, 3 I/O failure, 4 bad arguments.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from . import adversarial, noise, protocol, threshold
from .bell import BellDiagonal
from .linalg import EigenSolverError
from .solvers import SolverError

EXIT_OK, EXIT_NUMERIC, EXIT_IO, EXIT_ARGS = 0, 2, 3, 4
FORMATS = ("csv", "json")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ARGS, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    subcommand: str
    tol: float
    out: str | None
    format: str
    threads: int
    options: dict[str, Any] = field(default_factory=dict)

    def validate(self) -> None:
        if not self.tol > 0:
            raise UsageError("--tol must be positive")
        if self.format not in FORMATS:
            raise UsageError(f"--format must be one of {FORMATS}")
        if self.threads < 1:
            raise UsageError("--threads must be at least 1")
        for key, value in self.options.items():
            if key.endswith("step") and value is not None and not value > 0:
                raise UsageError(f"--{key.replace('_', '-')} must be positive")


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return "%.15g" % value
    return str(value)


def _jsonable(value):
    if isinstance(value, (float, np.floating)):
        v = float(value)
        return None if math.isnan(v) else float("%.15g" % v)
    if isinstance(value, np.integer):
        return int(value)
    return value


def render(columns: Sequence[str], rows: Sequence[Sequence], fmt: str) -> str:
    if fmt == "json":
        records = [{c: _jsonable(v) for c, v in zip(columns, row)} for row in rows]
        return json.dumps(records, indent=1) + "\n"
    lines = [",".join(columns)]
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def emit(cfg: RunConfig, columns: Sequence[str], rows: Sequence[Sequence]) -> None:
    text = render(columns, rows, cfg.format)
    if cfg.out is None:
        sys.stdout.write(text)
        return
    with open(cfg.out, "w", newline="\n") as fh:
        fh.write(text)


def note(message: str) -> None:
    print(message, file=sys.stderr)


def _grid(lo: float, hi: float, step: float) -> list[float]:
    if hi < lo:
        raise ValueError(f"empty range [{lo}, {hi}]")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return [round(lo + k * step, 12) for k in range(count)]


# -- subcommands -----------------------------------------------------------------


def cmd_max(cfg: RunConfig) -> None:
    best = threshold.max_apex(tol=cfg.tol, n_max=cfg.options["n_max"])
    r = best.residuals()
    emit(
        cfg,
        ("n", "p", "q", "f_star", "residual_eof", "residual_initial", "residual_gate"),
        [(best.n, best.p, best.q, best.f_star, *r)],
    )


def cmd_apex_scan(cfg: RunConfig) -> None:
    o = cfg.options
    points = threshold.apex_scan(o["n_min"], o["n_max"], o["step"], threads=cfg.threads)
    rows = [(a.n, a.p, a.q, a.f_star, a.residual_max) for a in points]
    emit(cfg, ("n", "p", "q", "f_star", "residual_max"), rows)
    if o.get("gnuplot"):
        with open(o["gnuplot"], "w", newline="\n") as fh:
            fh.write("# p q\n")
            for a in points:
                fh.write(f"{_fmt(a.p)} {_fmt(a.q)}\n")


def cmd_region(cfg: RunConfig) -> None:
    o = cfg.options
    n = o["n"]
    top = threshold.apex(n)
    limit = threshold.ancilla_limit()
    below, above = [], []
    for p in _grid(o["p_min"], o["p_max"], o["p_step"]):
        if p < 0:
            note(f"rejected p={_fmt(p)}: probabilities cannot be negative")
        elif p <= top.p:
            below.append(p)
        elif p <= limit:
            above.append(p)
        else:
            note(
                f"rejected p={_fmt(p)}: above 1-1/sqrt(2)={_fmt(limit)} the initial pairs "
                "are separable and cannot be purified"
            )
    rows = []
    if below:
        curve = threshold.region_boundary(n, below, tol=min(cfg.tol, 1e-12))
        rows += [(p, q, curve.branch) for p, q in curve.points]
    if above:
        curve = threshold.region_boundary_above(n, above, model=o["model"], tol=min(cfg.tol, 1e-12))
        rows += [(p, q, curve.branch) for p, q in curve.points]
    emit(cfg, ("p", "q", "branch"), rows)


def cmd_loss(cfg: RunConfig) -> None:
    o = cfg.options
    grid = _grid(o["qf_min"], o["qf_max"], o["qf_step"])
    points = threshold.loss_tradeoff(grid, n_max=o["n_max"], threads=cfg.threads)
    emit(cfg, ("q_f", "q_l_max", "n_star"), [(x.q_f, x.q_l_max, x.n_star) for x in points])


def _state_from(o: dict) -> BellDiagonal:
    if o.get("weights"):
        return BellDiagonal.from_weights(o["weights"])
    return BellDiagonal.werner(o["fidelity"])


def cmd_adversarial(cfg: RunConfig) -> None:
    o = cfg.options
    state = _state_from(o)
    grid = adversarial.UnitaryGrid(o["theta_steps"], o["axis_steps"])
    land = adversarial.eof_landscape(state, o["p"], grid)
    worst = adversarial.worst_unitary_search(
        state, o["p"], o["theta_steps"], o["axis_steps"], landscape=land
    )
    gap = float(np.min(land.eof - land.eof_twirled))
    paulis = adversarial.pauli_flip_eofs(state, o["p"])
    note(
        f"minimum eof {_fmt(worst.eof)} at theta={_fmt(worst.theta)} polar={_fmt(worst.polar)} "
        f"azimuth={_fmt(worst.azimuth)} (nearest Pauli {worst.nearest_pauli()}); "
        f"Pauli flips: " + ", ".join(f"{k}={_fmt(v)}" for k, v in paulis.items())
        + f"; min(exact - twirled) = {gap:.3e}"
    )
    if o["min_only"]:
        rows = [(worst.theta, worst.polar, worst.azimuth, worst.eof)]
    else:
        rows = [(*pt, e) for pt, e in zip(land.points.tolist(), land.eof.tolist())]
    emit(cfg, ("theta", "polar", "azimuth", "eof"), rows)


def cmd_simulate(cfg: RunConfig) -> None:
    o = cfg.options
    qs = _grid(o["q_min"], o["q_max"], o["q_step"])

    def run(q: float):
        spec = protocol.GateNoiseSpec(o["noise"], q, o["measurement_flip"])
        trace = protocol.recurse_to_fixed_point(o["f0"], spec, o["protocol"], o["max_rounds"])
        return (q, trace.verdict, len(trace.rounds), trace.final_fidelity)

    rows = threshold.parallel_map(run, qs, cfg.threads)
    emit(cfg, ("q", "verdict", "rounds", "final_f"), rows)
    if o["threshold"]:
        try:
            q_crit = protocol.protocol_threshold(
                o["noise"], o["protocol"], o["f0"], max_rounds=o["max_rounds"]
            )
            note(f"q_crit={_fmt(q_crit)}")
        except protocol.NoTransitionError as exc:
            note(f"q_crit: none ({exc})")


def cmd_survey(cfg: RunConfig) -> None:
    o = cfg.options
    survey = noise.pauli_pair_survey(o["q"], o["n"])
    rows = [(a, b, f) for (a, b), f in survey.fidelities.items()]
    note(
        f"{len(survey.distinct)} distinct fidelities; minimum {_fmt(survey.minimum)} "
        f"at {survey.pairs_at(survey.minimum)}"
    )
    emit(cfg, ("left", "right", "fidelity"), rows)


def cmd_ancilla_limit(cfg: RunConfig) -> None:
    p = threshold.ancilla_limit()
    emit(cfg, ("p", "f_p"), [(p, noise.fidelity_initial(p))])


COMMANDS = {
    "max": (
        cmd_max,
        "Largest gate error over all n-apexes.",
        "columns: n (copies at the maximiser), p (preparation error), q (gate error), "
        "f_star (apex fidelity), residual_eof, residual_initial, residual_gate "
        "(forward residuals of the three apex equations)",
    ),
    "apex-scan": (
        cmd_apex_scan,
        "Apex (p, q) over a grid of real n.",
        "columns: n, p, q, f_star, residual_max (largest forward residual of the apex equations)",
    ),
    "region": (
        cmd_region,
        "Boundary of the possibly purifiable region for fixed n.",
        "columns: p (preparation error), q (boundary gate error), branch "
        "(below-apex: exact F_q = F_p; above-apex-model: modelled F' = F_p)",
    ),
    "loss": (
        cmd_loss,
        "Trade-off between gate faults and qubit loss.",
        "columns: q_f (gate fault rate), q_l_max (largest tolerable loss rate), "
        "n_star (copies attaining it; nan when no loss is tolerable)",
    ),
    "adversarial": (
        cmd_adversarial,
        "Grid search for the most entanglement-destroying one-sided unitary fault.",
        "columns: theta (rotation angle), polar and azimuth (rotation axis angles), "
        "eof (exact entanglement of formation of the output, ebits)",
    ),
    "simulate": (
        cmd_simulate,
        "Recursive purification under noisy gates, swept over q.",
        "columns: q (per-qubit gate error), verdict (converged-up, converged-down, "
        "stationary), rounds (rounds run), final_f (last fidelity)",
    ),
    "survey": (
        cmd_survey,
        "Fidelity for each of the 9 direct Pauli error pairs.",
        "columns: left, right (Pauli on each qubit of the surviving pair), fidelity",
    ),
    "ancilla-limit": (
        cmd_ancilla_limit,
        "Largest preparation error that leaves the pair entangled at q = 0.",
        "columns: p (limit, 1-1/sqrt(2)), f_p (initial fidelity there, 1/2)",
    ),
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-10, help="solver tolerance")
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--format", choices=FORMATS, default="csv")
    common.add_argument("--threads", type=int, default=1, help="worker threads for grid rows")

    parser = _Parser(prog="purbound", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def add(name):
        _, help_text, columns = COMMANDS[name]
        return sub.add_parser(
            name,
            parents=[common],
            help=help_text,
            description=help_text,
            epilog=columns,
            formatter_class=argparse.RawDescriptionHelpFormatter,
        )

    p = add("max")
    p.add_argument("--n-max", type=float, default=threshold.N_MAX)

    p = add("apex-scan")
    p.add_argument("--n-min", type=float, default=1.5)
    p.add_argument("--n-max", type=float, default=6.0)
    p.add_argument("--step", type=float, default=0.01)
    p.add_argument("--gnuplot", help="also write a two-column 'p q' file here")

    p = add("region")
    p.add_argument("--n", type=float, required=True)
    p.add_argument("--p-min", type=float, default=0.0)
    p.add_argument("--p-max", type=float, default=0.29)
    p.add_argument("--p-step", type=float, default=0.005)
    p.add_argument("--model", choices=threshold.MODELS, default=threshold.MODELS[0])

    p = add("loss")
    p.add_argument("--qf-min", type=float, default=0.0)
    p.add_argument("--qf-max", type=float, default=0.06)
    p.add_argument("--qf-step", type=float, default=0.001)
    p.add_argument("--n-max", type=float, default=threshold.N_MAX)

    p = add("adversarial")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--fidelity", type=float, default=0.9, help="Werner-state fidelity")
    src.add_argument("--weights", type=float, nargs=4, metavar="W", help="Bell weights psi- phi- psi+ phi+")
    p.add_argument("--p", type=float, default=0.1, help="fault probability")
    p.add_argument("--theta-steps", type=int, default=adversarial.DEFAULT_STEPS)
    p.add_argument("--axis-steps", type=int, default=adversarial.DEFAULT_STEPS)
    p.add_argument("--min-only", action="store_true", help="emit only the minimising row")

    p = add("simulate")
    p.add_argument("--noise", choices=protocol.NOISE_MODELS, default="depolarizing")
    p.add_argument("--protocol", choices=protocol.PROTOCOLS, default="dejmps")
    p.add_argument("--f0", type=float, default=0.85)
    p.add_argument("--q-min", type=float, default=0.0)
    p.add_argument("--q-max", type=float, default=0.1)
    p.add_argument("--q-step", type=float, default=0.01)
    p.add_argument("--max-rounds", type=int, default=protocol.MAX_ROUNDS)
    p.add_argument("--measurement-flip", type=float, default=0.0)
    p.add_argument("--no-threshold", dest="threshold", action="store_false")

    p = add("survey")
    p.add_argument("--q", type=float, default=0.1)
    p.add_argument("--n", type=int, default=2)

    add("ancilla-limit")
    return parser


def parse_config(argv: Sequence[str] | None) -> RunConfig:
    args = vars(build_parser().parse_args(argv))
    cfg = RunConfig(
        subcommand=args.pop("subcommand"),
        tol=args.pop("tol"),
        out=args.pop("out"),
        format=args.pop("format"),
        threads=args.pop("threads"),
        options=args,
    )
    cfg.validate()
    return cfg


def main(argv: Sequence[str] | None = None) -> int:
    try:
        cfg = parse_config(argv)
    except UsageError as exc:
        note(f"purbound: error: {exc}")
        return EXIT_ARGS
    handler = COMMANDS[cfg.subcommand][0]
    try:
        handler(cfg)
    except OSError as exc:
        note(f"purbound: I/O error: {exc}")
        return EXIT_IO
    except (SolverError, EigenSolverError, ArithmeticError, ValueError) as exc:
        note(f"purbound: numerical failure: {exc}")
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
