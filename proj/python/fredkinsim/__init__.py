"""One-step controlled-SWAP between two bosonic quantum memories.

Thin python surface over the C++ core: state constructors, the gate and
protocol runner, swap tests, concurrence analysis and the reproduction
sweeps. Frequencies are /2pi values in Hz, times in seconds, rates in 1/s.
"""

from ._core import (  # noqa: F401
    DensityOp,
    DerivedParams,
    FsimError,
    Ket,
    LinOp,
    Measurement,
    PhysicalParams,
    ProtocolResult,
    SpaceLayout,
    cat_state,
    coherent_state,
    concurrence,
    concurrence_closed_form,
    concurrence_from_overlap,
    controlled_parity,
    derive,
    effective_gate_unitary,
    fock_state,
    ideal_fredkin,
    measure_control,
    overlap_fidelity,
    pulse_unitary,
    run_protocol,
    state_fidelity,
    swap_test,
    sweep_detuning,
    target_entangled_state,
    tensor,
    validate_low_excitation,
)

__all__ = [
    "DensityOp",
    "DerivedParams",
    "FsimError",
    "Ket",
    "LinOp",
    "Measurement",
    "PhysicalParams",
    "ProtocolResult",
    "SpaceLayout",
    "cat_state",
    "coherent_state",
    "concurrence",
    "concurrence_closed_form",
    "concurrence_from_overlap",
    "controlled_parity",
    "derive",
    "effective_gate_unitary",
    "fock_state",
    "ideal_fredkin",
    "measure_control",
    "overlap_fidelity",
    "pulse_unitary",
    "run_protocol",
    "state_fidelity",
    "swap_test",
    "sweep_detuning",
    "target_entangled_state",
    "tensor",
    "validate_low_excitation",
]
