"""First-order CNOT fault enumeration under end-of-circuit postselection."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .circuit import CLIFFORD_OPS, Circuit, validate_circuit
from .codes import Classification, DetectionContext, classify_residual
from .pauli import PauliOperator, commutes, conjugate_by_gate, single_qubit_pauli

__all__ = [
    "ERROR_LABELS",
    "FaultSite",
    "ResidualError",
    "FaultReport",
    "fault_sites",
    "propagate",
    "logical_error_count",
    "best_circuits",
    "SearchResult",
]

ERROR_LABELS = kernels.ERROR_LABELS
_CODE_TO_CLASS = {0: Classification.DETECTED, 1: Classification.BENIGN, 2: Classification.LOGICAL}
_OPCODE = {"CNOT": 0, "H": 1, "SX+": 2, "SX-": 2, "SZ+": 3, "SZ-": 3, "ROT": 4, "APREP": 5, "AMEAS": 5}
_AXIS = {"X": 1, "Z": 2, "Y": 3}


@dataclass(frozen=True)
class FaultSite:
    """Two-qubit Pauli ``error`` (control letter first) right after CNOT ``gate_index``."""

    gate_index: int
    error: str

    def pauli(self, c: Circuit) -> PauliOperator:
        g = c.gates[self.gate_index]
        if g.op != "CNOT":
            raise ValueError(f"gate {self.gate_index} is {g.op}, not CNOT")
        if self.error not in ERROR_LABELS:
            raise ValueError(f"not a non-identity two-qubit Pauli: {self.error!r}")
        ctrl, tgt = g.qubits
        p = PauliOperator(0, 0, c.n_qubits)
        for letter, q in zip(self.error, (ctrl, tgt)):
            if letter != "I":
                p = p * single_qubit_pauli(letter, q, c.n_qubits)
        return p


@dataclass(frozen=True)
class ResidualError:
    end_pauli: PauliOperator
    analog_flag: bool


@dataclass
class FaultReport:
    l: int
    n_detected: int
    n_benign: int
    total_sites: int
    logical_sites: list = field(default_factory=list)
    classes: np.ndarray | None = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {
            "l": self.l,
            "n_detected": self.n_detected,
            "n_benign": self.n_benign,
            "total_sites": self.total_sites,
            "logical_sites": [
                {
                    "gate_index": site.gate_index,
                    "error": site.error,
                    "end_pauli": str(res.end_pauli),
                    "analog_flag": res.analog_flag,
                }
                for site, res in self.logical_sites
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def fault_sites(c: Circuit) -> list[FaultSite]:
    return [FaultSite(i, e) for i in c.cnot_indices() for e in ERROR_LABELS]


def propagate(c: Circuit, f: FaultSite) -> ResidualError:
    """Push the fault to the end of the circuit; flag an anticommutation with
    the rotation axis on the way (the residual analog rotation)."""
    p = f.pauli(c)
    analog = False
    for g in c.gates[f.gate_index + 1:]:
        if g.op in CLIFFORD_OPS:
            p = conjugate_by_gate(p, g)
        elif g.op == "ROT":
            axis = single_qubit_pauli(g.pauli, g.qubits[0], c.n_qubits)
            analog = not commutes(p, axis)
    return ResidualError(p, analog)


def _tables(ctx: DetectionContext):
    cached = ctx.__dict__.get("_sweep_tables")
    if cached is not None:
        return cached
    rows = list(ctx.check_operators) + list(ctx.logical_operators)
    n_checks = len(ctx.check_operators)
    n_rows = len(rows) + 1
    xcol = [0] * ctx.total_qubits
    zcol = [0] * ctx.total_qubits
    for r, p in enumerate(rows):
        for q in range(ctx.total_qubits):
            if (p.x >> q) & 1:
                xcol[q] |= 1 << r
            if (p.z >> q) & 1:
                zcol[q] |= 1 << r
    check_mask = (1 << n_checks) - 1
    analog_bit = 1 << len(rows)
    logical_mask = (((1 << len(rows)) - 1) ^ check_mask) | analog_bit
    tables = (xcol, zcol, check_mask, logical_mask, analog_bit, n_rows)
    ctx.__dict__["_sweep_tables"] = tables
    return tables


def _encode(c: Circuit):
    n = len(c.gates)
    ops = np.empty(n, dtype=np.int8)
    qa = np.empty(n, dtype=np.int32)
    qb = np.zeros(n, dtype=np.int32)
    for i, g in enumerate(c.gates):
        ops[i] = _OPCODE[g.op]
        qa[i] = g.qubits[0]
        if g.op == "CNOT":
            qb[i] = g.qubits[1]
        elif g.op == "ROT":
            qb[i] = _AXIS[g.pauli]
    return ops, qa, qb


def _classify_fast(c: Circuit, ctx: DetectionContext, force_python: bool = False):
    xcol, zcol, check_mask, logical_mask, analog_bit, n_rows = _tables(ctx)
    ops, qa, qb = _encode(c)
    out = np.empty(15 * c.cnot_count, dtype=np.int8)
    if force_python:
        counts = kernels.python_sweep(ops, qa, qb, xcol, zcol, check_mask, logical_mask, analog_bit, out)
    else:
        counts = kernels.sweep(ops, qa, qb, xcol, zcol, check_mask, logical_mask, analog_bit, out, n_rows)
    return counts, out


def _classify_reference(c: Circuit, ctx: DetectionContext):
    classes = []
    for site in fault_sites(c):
        res = propagate(c, site)
        classes.append(classify_residual(ctx, res.end_pauli, res.analog_flag))
    out = np.array([{Classification.DETECTED: 0, Classification.BENIGN: 1,
                     Classification.LOGICAL: 2}[k] for k in classes], dtype=np.int8)
    l = int(np.sum(out == 2))
    nd = int(np.sum(out == 0))
    return (l, nd, len(out) - l - nd), out


def logical_error_count(
    c: Circuit,
    ctx: DetectionContext,
    method: str = "sweep",
    with_sites: bool = True,
) -> FaultReport:
    """Tally all ``15·G`` first-order CNOT faults.

    ``method`` is ``"sweep"`` (compiled when available), ``"python"`` (the
    pure-Python sweep) or ``"reference"`` (forward propagation of every fault
    and explicit group-membership tests).  All three agree.
    """
    validate_circuit(c)
    ctx = ctx.for_circuit(c)
    if method == "reference":
        (l, nd, nb), out = _classify_reference(c, ctx)
    elif method in ("sweep", "python"):
        (l, nd, nb), out = _classify_fast(c, ctx, force_python=method == "python")
    else:
        raise ValueError(f"unknown method {method!r}")
    logical_sites = []
    if with_sites and l:
        cnots = c.cnot_indices()
        for pos in np.flatnonzero(out == 2):
            site = FaultSite(cnots[pos // 15], ERROR_LABELS[pos % 15])
            logical_sites.append((site, propagate(c, site)))
    return FaultReport(int(l), int(nd), int(nb), len(out), logical_sites, out)


def _count_only(c: Circuit, ctx: DetectionContext) -> int:
    (l, _, _), _ = _classify_fast(c, ctx.for_circuit(c))
    return int(l)


@dataclass
class SearchResult:
    min_l: int
    best: list
    n_candidates: int
    l_histogram: dict = field(default_factory=dict)


def best_circuits(candidates: Iterable[Circuit], ctx: DetectionContext) -> SearchResult:
    """Minimum ``l`` over the candidates and every circuit attaining it, in input order."""
    best: list[Circuit] = []
    min_l = None
    n = 0
    hist: dict[int, int] = {}
    for c in candidates:
        n += 1
        l = _count_only(c, ctx)
        hist[l] = hist.get(l, 0) + 1
        if min_l is None or l < min_l:
            min_l = l
            best = [c]
        elif l == min_l:
            best.append(c)
    if min_l is None:
        raise ValueError("empty candidate list")
    return SearchResult(min_l, best, n, dict(sorted(hist.items())))
