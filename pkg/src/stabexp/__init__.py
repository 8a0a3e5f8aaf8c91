"""Encoded exponential operators exp(-iθP) over small stabilizer codes."""

from .pauli import PauliOperator, commutes, conjugate_by_gate, multiply, pauli_from_string
from .codes import (
    Classification,
    DetectionContext,
    StabilizerCode,
    build_code,
    classify_residual,
    logical_rep,
    multi_block_context,
    syndrome,
)
from .circuit import Circuit, Gate, parse_circuit, preserves_codespace, realized_pauli, serialize_circuit, validate_circuit
from .construct import add_1q_gates, add_ancilla, candidate_set, generate_base, iter_candidates, staircase, transversal_multiblock
from .faults import FaultReport, FaultSite, best_circuits, logical_error_count, propagate
from .kernels import BACKEND

__version__ = "0.1.0"
