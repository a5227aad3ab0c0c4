"""Simulator of the five-pulse trapped-ion CNOT gate driven by quantized
coherent laser fields.

The compiled core exposes the channel construction (Kraus trace-out of each
pulse's field mode, 144x144 superoperator), failure probabilities after
repeated gate applications, the certified Poisson-weighted sums S1..S10, and
the exact joint-state oracle for small mean photon numbers.
"""

from czsim._core import (
    CertificationError,
    Gate,
    __version__,
    choose_window,
    expected_state,
    ideal_gate_unitary,
    oracle_gate_output,
    poisson_weight,
    preset_names,
    s_sums,
    s_sums_extended,
    trace_out_phonon,
)

__all__ = [
    "CertificationError",
    "Gate",
    "__version__",
    "choose_window",
    "expected_state",
    "ideal_gate_unitary",
    "oracle_gate_output",
    "poisson_weight",
    "preset_names",
    "s_sums",
    "s_sums_extended",
    "trace_out_phonon",
]
