"""Circuit generators for encoded exponentials ``exp(-iθP)``.

Base circuits are built recursively by wrapping a smaller base in a pair of
CNOTs that extends the realized Pauli by one qubit: a new control onto a Z/Y
qubit adds a Z, a new target from an X/Y qubit adds an X.  The seed rotation
sits on qubit ``N-1`` and the ``m``-th added qubit is ``N-1-m``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .circuit import Circuit, Gate, ameas, aprep, cnot, h, rot, sx, sz
from .codes import StabilizerCode
from .pauli import PauliOperator, pauli_from_string

__all__ = [
    "BaseCircuit",
    "ConstructionError",
    "generate_base",
    "iter_base",
    "base_count",
    "add_ancilla",
    "add_1q_gates",
    "relabel",
    "iter_candidates",
    "iter_indexed_candidates",
    "candidate_set",
    "candidate_count",
    "staircase",
    "transversal_multiblock",
    "DRESSING",
]


class ConstructionError(ValueError):
    pass


@dataclass(frozen=True)
class BaseCircuit:
    circuit: Circuit
    pattern: str  # realized component per qubit, qubit 0 first
    base_kind: str

    @property
    def rotation_qubit(self) -> int:
        return self.circuit.n_qubits - 1

    @property
    def realized_pattern(self) -> PauliOperator:
        return pauli_from_string(self.pattern)


def _extensions(pattern: list[str], n_qubits: int):
    # Existing qubits in ascending index; LEFT before RIGHT.
    for j in range(n_qubits):
        comp = pattern[j]
        if comp in ("Z", "Y"):
            yield j, "LEFT"
        if comp in ("X", "Y"):
            yield j, "RIGHT"


def iter_base(kind: str, N: int) -> Iterator[BaseCircuit]:
    """Depth-first enumeration of the ``kind``-based family on ``N`` qubits."""
    if kind not in ("X", "Y", "Z"):
        raise ConstructionError(f"base kind must be X, Y or Z, got {kind!r}")
    if N < 1:
        raise ConstructionError("base circuits need at least one qubit")
    pattern = ["I"] * N
    pattern[N - 1] = kind
    outer: list[Gate] = []  # pre-rotation CNOTs, outermost first

    def rec(added: int):
        if added == N - 1:
            gates = tuple(outer) + (rot(kind, N - 1),) + tuple(reversed(outer))
            yield BaseCircuit(Circuit(N, gates), "".join(pattern), kind)
            return
        a = N - 2 - added
        for j, side in list(_extensions(pattern, N)):
            g = cnot(a, j) if side == "LEFT" else cnot(j, a)
            pattern[a] = "Z" if side == "LEFT" else "X"
            outer.insert(0, g)
            yield from rec(added + 1)
            outer.pop(0)
            pattern[a] = "I"

    yield from rec(0)


def generate_base(kind: str, N: int) -> list[BaseCircuit]:
    return list(iter_base(kind, N))


def base_count(kind: str, N: int) -> int:
    if N < 1:
        raise ConstructionError("base circuits need at least one qubit")
    return math.factorial(N) if kind == "Y" else math.factorial(N - 1)


def add_ancilla(base: BaseCircuit, j: int | Sequence[int]) -> Circuit:
    """Turn base qubit(s) ``j`` into ancillas prepared and measured in the
    basis of the pattern component there."""
    js = [j] if isinstance(j, int) else list(j)
    n = base.circuit.n_qubits
    for q in js:
        if not 0 <= q < n:
            raise ConstructionError(f"ancilla position {q} outside 0..{n - 1}")
    if len(set(js)) != len(js):
        raise ConstructionError("repeated ancilla position")
    if len(js) >= n:
        raise ConstructionError("at least one data qubit must remain")
    js = sorted(js)
    pre = tuple(aprep(q, base.pattern[q]) for q in js)
    post = tuple(ameas(q, base.pattern[q]) for q in js)
    return Circuit(n, pre + base.circuit.gates + post)


def relabel(c: Circuit, mapping: Sequence[int], n_qubits: int) -> Circuit:
    """Move qubit ``i`` to ``mapping[i]`` on an ``n_qubits`` register."""
    out = []
    for g in c.gates:
        qs = tuple(mapping[q] for q in g.qubits)
        out.append(_regate(g, qs))
    return Circuit(n_qubits, tuple(out))


def _regate(g: Gate, qs: tuple[int, ...]) -> Gate:
    if g.op == "CNOT":
        return cnot(*qs)
    if g.op == "ROT":
        return rot(g.pauli, qs[0])
    if g.op == "APREP":
        return aprep(qs[0], g.pauli)
    if g.op == "AMEAS":
        return ameas(qs[0], g.pauli)
    if g.op == "H":
        return h(qs[0])
    return sx(qs[0], g.op[2]) if g.op.startswith("SX") else sz(qs[0], g.op[2])


# (realized, target) -> (gate before, gate after), acting on that qubit.
DRESSING = {
    ("Z", "X"): ("H", "H"),
    ("X", "Z"): ("H", "H"),
    ("Z", "Y"): ("SX+", "SX-"),
    ("X", "Y"): ("SZ-", "SZ+"),
    ("Y", "Z"): ("SX-", "SX+"),
    ("Y", "X"): ("SZ+", "SZ-"),
}


def _one(op: str, q: int) -> Gate:
    if op == "H":
        return h(q)
    return sx(q, op[2]) if op.startswith("SX") else sz(q, op[2])


def add_1q_gates(c: Circuit, target: PauliOperator, realized: str | None = None) -> Circuit:
    """Sandwich data qubits with single-qubit Cliffords so the circuit realizes
    ``target`` (up to sign).  ``realized`` is the current per-qubit pattern;
    computed from the circuit when omitted."""
    if realized is None:
        from .circuit import realized_pauli

        realized = realized_pauli(c).letters()
    if target.n != c.n_qubits:
        target = target.resize(c.n_qubits)
    ancillas = c.ancillas
    pre: list[Gate] = []
    post: list[Gate] = []
    for q in range(c.n_qubits):
        if q in ancillas:
            continue
        r, t = realized[q], target.component(q)
        if (r == "I") != (t == "I"):
            raise ConstructionError(f"support mismatch on qubit {q}: realized {r}, target {t}")
        if r == t:
            continue
        before, after = DRESSING[(r, t)]
        pre.append(_one(before, q))
        post.append(_one(after, q))
    if not pre:
        return c
    gates = c.gates
    k = 0
    while k < len(gates) and gates[k].op == "APREP":
        k += 1
    m = len(gates)
    while m > k and gates[m - 1].op == "AMEAS":
        m -= 1
    return Circuit(c.n_qubits, gates[:k] + tuple(pre) + gates[k:m] + tuple(post) + gates[m:])


def _kinds(bases: Iterable[str] | str) -> list[str]:
    ks = [b.upper() for b in bases]
    for b in ks:
        if b not in ("X", "Y", "Z"):
            raise ConstructionError(f"unknown base kind {b!r}")
    # Algorithm order: X, Y, Z
    return [k for k in ("X", "Y", "Z") if k in ks]


def iter_candidates(
    target: PauliOperator, n_a: int = 0, bases: Iterable[str] | str = "XYZ"
) -> Iterator[Circuit]:
    """Candidate circuits for ``exp(-iθ·target)`` with ``n_a`` ancillas.

    The circuit register is ``target.n`` data qubits followed by ``n_a``
    ancillas.  For every base circuit on ``N = t + n_a`` qubits and every
    choice of ``n_a`` base qubits to become ancillas, the remaining base
    qubits are mapped in order onto the sorted support of ``target``.
    """
    for _, c in iter_indexed_candidates(target, n_a, bases):
        yield c


def iter_indexed_candidates(
    target: PauliOperator,
    n_a: int = 0,
    bases: Iterable[str] | str = "XYZ",
    shard: tuple[int, int] | None = None,
) -> Iterator[tuple[int, Circuit]]:
    """Like :func:`iter_candidates` but yields ``(position, circuit)``.

    ``shard=(i, k)`` keeps only base circuits whose running index is ``i``
    mod ``k``; positions still refer to the unsharded order.
    """
    t = target.weight
    if t < 1:
        raise ConstructionError("target must have weight >= 1")
    if n_a < 0:
        raise ConstructionError("ancilla count must be non-negative")
    N = t + n_a
    support = target.support_indices()
    n_total = target.n + n_a
    padded = target.resize(n_total)
    kinds = _kinds(bases)
    choices = list(combinations(range(N), n_a))
    b = -1
    for kind in kinds:
        for base in iter_base(kind, N):
            b += 1
            if shard is not None and b % shard[1] != shard[0]:
                continue
            for ai, anc in enumerate(choices):
                mapping = [0] * N
                data_it = iter(support)
                anc_pos = {q: target.n + i for i, q in enumerate(anc)}
                for q in range(N):
                    mapping[q] = anc_pos[q] if q in anc_pos else next(data_it)
                c = add_ancilla(base, anc) if n_a else base.circuit
                c = relabel(c, mapping, n_total)
                realized = ["I"] * n_total
                for q in range(N):
                    realized[mapping[q]] = base.pattern[q]
                yield b * len(choices) + ai, add_1q_gates(c, padded, "".join(realized))


def candidate_set(
    target: PauliOperator, n_a: int = 0, bases: Iterable[str] | str = "XYZ"
) -> list[Circuit]:
    return list(iter_candidates(target, n_a, bases))


def candidate_count(t: int, n_a: int = 0, bases: Iterable[str] | str = "XYZ") -> int:
    N = t + n_a
    return sum(base_count(k, N) for k in _kinds(bases)) * math.comb(N, n_a)


def staircase(target: PauliOperator) -> Circuit:
    """CNOT ladder from every support qubit into the last one, which carries
    the Z rotation; dressed to ``target``.  Uses ``2(t-1)`` CNOTs."""
    s = target.support_indices()
    if not s:
        raise ConstructionError("staircase needs a target of weight >= 1")
    last = s[-1]
    ladder = tuple(cnot(a, last) for a in s[:-1])
    gates = ladder + (rot("Z", last),) + tuple(reversed(ladder))
    realized = ["I"] * target.n
    for q in s:
        realized[q] = "Z"
    return add_1q_gates(Circuit(target.n, gates), target, "".join(realized))


def _weight3_logical(code: StabilizerCode) -> PauliOperator:
    lz = code.logical_z[0]
    if lz.weight == 3:
        return lz
    raise ConstructionError(f"{code.name} has no weight-3 logical Z representative")


def transversal_multiblock(code: StabilizerCode, w: int) -> Circuit:
    """``exp(-iθ Z̄^{⊗w})`` over ``w`` blocks: transversal CNOT layers on the
    weight-3 Z̄ support chain each block into the next, the single-block
    staircase gadget acts on the last block, then the layers are undone."""
    if code.name not in ("five_1_3", "steane"):
        raise ConstructionError(f"transversal builder supports five_1_3 and steane, not {code.name}")
    if w < 2:
        raise ConstructionError("need at least two blocks")
    lz = _weight3_logical(code)
    n = code.n
    total = w * n
    layers: list[Gate] = []
    for b in range(w - 1):
        for q in lz.support_indices():
            lo, hi = b * n + q, (b + 1) * n + q
            # Z components spread control->target, X components target->control.
            layers.append(cnot(lo, hi) if lz.component(q) == "Z" else cnot(hi, lo))
    gadget = staircase(lz.embed(total, (w - 1) * n))
    gates = tuple(layers) + gadget.gates + tuple(reversed(layers))
    return Circuit(total, gates)
