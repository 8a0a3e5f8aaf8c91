"""Gate-level circuits holding exactly one symbolic rotation."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Iterable, NamedTuple

from .pauli import PauliOperator, commutes, conjugate_by_gate, single_qubit_pauli

__all__ = [
    "Gate",
    "Circuit",
    "CircuitError",
    "CircuitValidationError",
    "CircuitParseError",
    "NotExponentialForm",
    "CLIFFORD_OPS",
    "cnot", "h", "sx", "sz", "rot", "aprep", "ameas",
    "validate_circuit",
    "realized_pauli",
    "preserves_codespace",
    "parse_circuit",
    "serialize_circuit",
    "read_circuit",
    "write_circuit",
]

CLIFFORD_OPS = frozenset({"CNOT", "H", "SX+", "SX-", "SZ+", "SZ-"})
_INVERSE = {"CNOT": "CNOT", "H": "H", "SX+": "SX-", "SX-": "SX+", "SZ+": "SZ-", "SZ-": "SZ+"}
_PAULI_OPS = frozenset({"ROT", "APREP", "AMEAS"})


class Gate(NamedTuple):
    op: str
    qubits: tuple[int, ...]
    pauli: str = ""

    def inverse(self) -> "Gate":
        return _gate(_INVERSE[self.op], self.qubits, self.pauli)

    def __str__(self) -> str:
        if self.op == "ROT":
            return f"ROT {self.pauli} {self.qubits[0]}"
        if self.op in ("APREP", "AMEAS"):
            return f"{self.op} {self.qubits[0]} {self.pauli}"
        return " ".join([self.op, *map(str, self.qubits)])


@lru_cache(maxsize=None)
def _gate(op: str, qubits: tuple[int, ...], pauli: str = "") -> Gate:
    # Interned so that large candidate sets share gate objects.
    return Gate(op, qubits, pauli)


def cnot(control: int, target: int) -> Gate:
    return _gate("CNOT", (control, target))


def h(q: int) -> Gate:
    return _gate("H", (q,))


def sx(q: int, sign: str = "+") -> Gate:
    return _gate("SX" + sign, (q,))


def sz(q: int, sign: str = "+") -> Gate:
    return _gate("SZ" + sign, (q,))


def rot(axis: str, q: int) -> Gate:
    return _gate("ROT", (q,), axis)


def aprep(q: int, basis: str) -> Gate:
    return _gate("APREP", (q,), basis)


def ameas(q: int, basis: str) -> Gate:
    return _gate("AMEAS", (q,), basis)


class CircuitError(ValueError):
    pass


class CircuitValidationError(CircuitError):
    """Structural violation; ``kind`` is one of MissingRotation,
    MultipleRotations, AncillaOrdering, QubitRange, InvalidGate."""

    def __init__(self, kind: str, gate_index: int | None, message: str):
        self.kind = kind
        self.gate_index = gate_index
        where = "" if gate_index is None else f" (gate {gate_index})"
        super().__init__(f"{kind}{where}: {message}")


class CircuitParseError(CircuitError):
    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


class NotExponentialForm(CircuitError):
    pass


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    gates: tuple[Gate, ...]

    def __post_init__(self):
        if not isinstance(self.gates, tuple):
            object.__setattr__(self, "gates", tuple(self.gates))

    @cached_property
    def ancillas(self) -> dict[int, str]:
        return {g.qubits[0]: g.pauli for g in self.gates if g.op == "APREP"}

    @property
    def ancilla_set(self) -> frozenset[int]:
        return frozenset(self.ancillas)

    @cached_property
    def rotation_index(self) -> int:
        idx = [i for i, g in enumerate(self.gates) if g.op == "ROT"]
        if len(idx) != 1:
            raise CircuitValidationError(
                "MissingRotation" if not idx else "MultipleRotations",
                idx[1] if len(idx) > 1 else None,
                f"found {len(idx)} rotation gates",
            )
        return idx[0]

    @property
    def rotation(self) -> Gate:
        return self.gates[self.rotation_index]

    @property
    def cnot_count(self) -> int:
        return sum(1 for g in self.gates if g.op == "CNOT")

    def cnot_indices(self) -> list[int]:
        return [i for i, g in enumerate(self.gates) if g.op == "CNOT"]

    def __len__(self) -> int:
        return len(self.gates)

    def __str__(self) -> str:
        return serialize_circuit(self)


def validate_circuit(c: Circuit) -> None:
    """Raise :class:`CircuitValidationError` at the first structural violation."""
    rotations = []
    prepared: dict[int, str] = {}
    measured: dict[int, int] = {}
    touched: dict[int, int] = {}
    for i, g in enumerate(c.gates):
        if g.op not in CLIFFORD_OPS and g.op not in _PAULI_OPS:
            raise CircuitValidationError("InvalidGate", i, f"unknown op {g.op!r}")
        arity = 2 if g.op == "CNOT" else 1
        if len(g.qubits) != arity:
            raise CircuitValidationError("InvalidGate", i, f"{g.op} takes {arity} qubit(s)")
        for q in g.qubits:
            if not 0 <= q < c.n_qubits:
                raise CircuitValidationError("QubitRange", i, f"qubit {q} outside 0..{c.n_qubits - 1}")
        if g.op == "CNOT" and g.qubits[0] == g.qubits[1]:
            raise CircuitValidationError("InvalidGate", i, "CNOT control equals target")
        if g.op in _PAULI_OPS and g.pauli not in ("X", "Y", "Z"):
            raise CircuitValidationError("InvalidGate", i, f"bad Pauli {g.pauli!r}")
        if g.op == "ROT":
            rotations.append(i)
            if len(rotations) > 1:
                raise CircuitValidationError("MultipleRotations", i, "circuit has more than one rotation")
        q0 = g.qubits[0]
        if g.op == "APREP":
            if q0 in prepared or q0 in touched:
                raise CircuitValidationError("AncillaOrdering", i, f"ancilla {q0} prepared after use")
            prepared[q0] = g.pauli
            continue
        if g.op == "AMEAS":
            if q0 not in prepared:
                raise CircuitValidationError("AncillaOrdering", i, f"ancilla {q0} measured before preparation")
            if q0 in measured:
                raise CircuitValidationError("AncillaOrdering", i, f"ancilla {q0} measured twice")
            if prepared[q0] != g.pauli:
                raise CircuitValidationError("AncillaOrdering", i, f"ancilla {q0} measure basis differs from prep")
            measured[q0] = i
            continue
        for q in g.qubits:
            if q in measured:
                raise CircuitValidationError("AncillaOrdering", i, f"ancilla {q} used after measurement")
            touched.setdefault(q, i)
    if not rotations:
        raise CircuitValidationError("MissingRotation", None, "circuit has no rotation")
    for q in prepared:
        if q not in measured:
            raise CircuitValidationError("AncillaOrdering", None, f"ancilla {q} never measured")


def realized_pauli(c: Circuit, full: bool = False) -> PauliOperator:
    """The Pauli ``P`` such that the circuit equals ``exp(-iθP)``.

    With ``full=False`` ancilla components are dropped, which is the operator
    acting on the data qubits once the ancillas are postselected.
    """
    validate_circuit(c)
    n = c.n_qubits
    r = c.rotation_index
    clifford = [g for g in c.gates if g.op in CLIFFORD_OPS]
    for q in range(n):
        for letter in "XZ":
            p0 = single_qubit_pauli(letter, q, n)
            p = p0
            for g in clifford:
                p = conjugate_by_gate(p, g)
            if p != p0:
                raise NotExponentialForm(
                    f"gates before and after the rotation do not cancel: {p0} -> {p}"
                )
    rg = c.gates[r]
    p = single_qubit_pauli(rg.pauli, rg.qubits[0], n)
    for g in c.gates[r + 1:]:
        if g.op in CLIFFORD_OPS:
            p = conjugate_by_gate(p, g)
    if full:
        return p
    anc_mask = 0
    for q, basis in c.ancillas.items():
        comp = p.component(q)
        if comp not in ("I", basis):
            raise NotExponentialForm(f"ancilla {q} component {comp} is not I or {basis}")
        anc_mask |= 1 << q
    return p.restrict(~anc_mask & ((1 << n) - 1))


def preserves_codespace(c: Circuit, ctx) -> bool:
    p = realized_pauli(c)
    total = ctx.total_qubits
    if p.n > total:
        # Extra ancillas beyond the context: their components were stripped.
        p = PauliOperator(p.x & ((1 << total) - 1), p.z & ((1 << total) - 1), total, p.phase)
    elif p.n < total:
        p = p.resize(total)
    return all(commutes(p, chk) for chk in ctx.check_operators)


# -- text format -------------------------------------------------------------

def serialize_circuit(c: Circuit, header: Iterable[str] = ()) -> str:
    lines = [f"# {h}" for h in header]
    lines.append(f"QUBITS {c.n_qubits}")
    lines.extend(str(g) for g in c.gates)
    return "\n".join(lines) + "\n"


def _int(tok: str, line_no: int) -> int:
    try:
        v = int(tok)
    except ValueError:
        raise CircuitParseError(line_no, f"expected a qubit index, got {tok!r}") from None
    if v < 0:
        raise CircuitParseError(line_no, f"negative qubit index {v}")
    return v


def _pauli_tok(tok: str, line_no: int) -> str:
    if tok not in ("X", "Y", "Z"):
        raise CircuitParseError(line_no, f"expected X, Y or Z, got {tok!r}")
    return tok


def parse_circuit(text: str) -> Circuit:
    n_qubits = None
    gates: list[Gate] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        op, args = tok[0].upper(), tok[1:]
        expected = {"QUBITS": 1, "CNOT": 2, "H": 1, "SX+": 1, "SX-": 1, "SZ+": 1, "SZ-": 1,
                    "ROT": 2, "APREP": 2, "AMEAS": 2}
        if op not in expected:
            raise CircuitParseError(line_no, f"unknown instruction {tok[0]!r}")
        if len(args) != expected[op]:
            raise CircuitParseError(line_no, f"{op} takes {expected[op]} argument(s)")
        if op == "QUBITS":
            if n_qubits is not None:
                raise CircuitParseError(line_no, "QUBITS given twice")
            n_qubits = _int(args[0], line_no)
            continue
        if n_qubits is None:
            raise CircuitParseError(line_no, "QUBITS must come before any gate")
        if op == "CNOT":
            gates.append(cnot(_int(args[0], line_no), _int(args[1], line_no)))
        elif op == "ROT":
            gates.append(rot(_pauli_tok(args[0], line_no), _int(args[1], line_no)))
        elif op in ("APREP", "AMEAS"):
            gates.append(_gate(op, (_int(args[0], line_no),), _pauli_tok(args[1], line_no)))
        else:
            gates.append(_gate(op, (_int(args[0], line_no),)))
    if n_qubits is None:
        raise CircuitParseError(0, "missing QUBITS line")
    return Circuit(n_qubits, tuple(gates))


def read_circuit(path: str | Path) -> Circuit:
    return parse_circuit(Path(path).read_text())


def write_circuit(c: Circuit, path: str | Path, header: Iterable[str] = ()) -> None:
    Path(path).write_text(serialize_circuit(c, header))
