"""qsakit: exact N-body Pauli propagators from untunable two-body pulses.

The package compiles arbitrary Pauli-string targets into analytically exact
schedules of fixed-strength attachment and swapper pulses, applies the
construction to a plaquette spin model (Hamiltonian build, digital evolution,
ground-state preparation), drives string/anyon logic on top of it (syndromes,
loop memories, magic states, a braided CNOT), and quantifies pulse-strength
dilution and control-error scaling.  Everything is verified against a dense
matrix/statevector oracle.
"""

from .pauli_core import (
    PauliString,
    WeightedPauliSum,
    commutes,
    multiply,
    square,
    sum_commutes,
)
from .propagator_engine import (
    AttachmentSpec,
    InvolutionRotation,
    SwapperSpec,
    apply_swap,
    conjugate,
    make_attachment,
    make_swapper,
)
from .schedule_compiler import (
    ConnectivityGraph,
    QsaSchedule,
    compile_schedule,
    depth_bound,
    replay_symbolic,
    validate,
)
from .dense_oracle import (
    DenseOperator,
    ResourceLimitError,
    Statevector,
    apply_schedule,
    distance,
    expm,
    schedule_unitary,
    to_matrix,
    verify_schedule,
)
from .toric_lattice import (
    DigitalSequence,
    HoleSpec,
    LatticeError,
    LatticeSpec,
    PlaquetteSet,
    TwistSpec,
    build_variant,
    build_wen,
    digital_sequence,
    ground_state_projector,
    ground_state_sweep,
    plaquette_schedule,
)
from .anyon_logic import (
    EncodingError,
    LogicalQubit,
    LoopCnot,
    PathError,
    StringPath,
    StringPropagator,
    Syndrome,
    TopologyError,
    UnsupportedOperationError,
    anyon_walk,
    braiding_phase,
    code_state,
    hole_logicals,
    hole_qubit,
    interleaved_propagators,
    loop_cnot,
    magic_report,
    magic_state,
    memory_basis,
    memory_encode,
    memory_qubits,
    naive_move_error,
    path_string,
    predict_syndrome,
    string_propagator,
    syndrome_of,
)
from .analysis import (
    ErrorScalingReport,
    StrengthParams,
    error_scaling,
    strength_target,
    strength_toric,
)

__all__ = [
    "PauliString",
    "WeightedPauliSum",
    "commutes",
    "multiply",
    "square",
    "sum_commutes",
    "AttachmentSpec",
    "SwapperSpec",
    "InvolutionRotation",
    "make_attachment",
    "make_swapper",
    "conjugate",
    "apply_swap",
    "ConnectivityGraph",
    "QsaSchedule",
    "compile_schedule",
    "depth_bound",
    "replay_symbolic",
    "validate",
    "DenseOperator",
    "Statevector",
    "ResourceLimitError",
    "to_matrix",
    "expm",
    "apply_schedule",
    "schedule_unitary",
    "distance",
    "verify_schedule",
    "LatticeSpec",
    "HoleSpec",
    "TwistSpec",
    "LatticeError",
    "PlaquetteSet",
    "DigitalSequence",
    "build_wen",
    "build_variant",
    "plaquette_schedule",
    "digital_sequence",
    "ground_state_projector",
    "ground_state_sweep",
    "StringPath",
    "Syndrome",
    "StringPropagator",
    "LogicalQubit",
    "LoopCnot",
    "PathError",
    "EncodingError",
    "TopologyError",
    "UnsupportedOperationError",
    "path_string",
    "syndrome_of",
    "predict_syndrome",
    "string_propagator",
    "interleaved_propagators",
    "anyon_walk",
    "braiding_phase",
    "memory_qubits",
    "memory_basis",
    "memory_encode",
    "code_state",
    "hole_qubit",
    "hole_logicals",
    "magic_state",
    "magic_report",
    "loop_cnot",
    "naive_move_error",
    "StrengthParams",
    "ErrorScalingReport",
    "strength_target",
    "strength_toric",
    "error_scaling",
]

__version__ = "0.1.0"
