"""Upper bounds on fault-tolerant thresholds for two-qubit entanglement purification."""

from .bell import (
    BellDiagonal,
    DensityMatrix4,
    TwoQubitPauli,
    binary_entropy,
    concurrence,
    eof,
    eof_general,
    eof_inverse,
    pauli_apply,
    twirl,
)
from .noise import (
    LossParams,
    NoiseParams,
    fidelity_gate,
    fidelity_gate_oracle,
    fidelity_gate_sum,
    fidelity_initial,
    loss_fidelity_gate,
    loss_fidelity_initial,
    pauli_pair_survey,
)
from .threshold import (
    ApexPoint,
    BoundaryCurve,
    ancilla_limit,
    apex,
    apex_scan,
    loss_tradeoff,
    max_apex,
    region_boundary,
    region_boundary_above,
    repeater_check,
)

__version__ = "0.1.0"
