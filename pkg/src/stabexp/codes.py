"""Stabilizer code definitions, detection contexts and residual classification."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

from .pauli import (
    DimensionError,
    PauliOperator,
    commutes,
    multiply,
    pauli_from_string,
    single_qubit_pauli,
)

__all__ = [
    "StabilizerCode",
    "DetectionContext",
    "Classification",
    "CodeError",
    "build_code",
    "logical_rep",
    "parse_logical_label",
    "syndrome",
    "classify_residual",
    "multi_block_context",
    "in_span",
    "load_code",
    "dump_code",
]


class CodeError(ValueError):
    pass


class Classification(enum.Enum):
    DETECTED = "detected"
    BENIGN = "benign"
    LOGICAL = "logical"


def _symplectic_row(p: PauliOperator) -> int:
    return p.x | (p.z << p.n)


def _reduce(vec: int, pivots: dict[int, int]) -> int:
    while vec:
        top = vec.bit_length() - 1
        row = pivots.get(top)
        if row is None:
            return vec
        vec ^= row
    return 0


def _echelon(rows: Iterable[int]) -> dict[int, int]:
    pivots: dict[int, int] = {}
    for r in rows:
        r = _reduce(r, pivots)
        if r:
            pivots[r.bit_length() - 1] = r
    return pivots


def in_span(p: PauliOperator, basis: Sequence[PauliOperator]) -> bool:
    """Whether ``p`` (up to phase) lies in the group generated by ``basis``."""
    return _reduce(_symplectic_row(p), _echelon(_symplectic_row(b) for b in basis)) == 0


@dataclass(frozen=True)
class StabilizerCode:
    name: str
    n: int
    k: int
    d: int
    generators: tuple[PauliOperator, ...]
    logical_x: tuple[PauliOperator, ...]
    logical_z: tuple[PauliOperator, ...]

    def validate(self) -> None:
        """Raise :class:`CodeError` unless the defining invariants hold."""
        ops = list(self.generators) + list(self.logical_x) + list(self.logical_z)
        if any(p.n != self.n for p in ops):
            raise CodeError(f"{self.name}: operator on wrong qubit count")
        if len(self.generators) != self.n - self.k:
            raise CodeError(f"{self.name}: expected {self.n - self.k} generators")
        if len(self.logical_x) != self.k or len(self.logical_z) != self.k:
            raise CodeError(f"{self.name}: expected {self.k} logical pairs")
        for i, a in enumerate(self.generators):
            for b in self.generators[i + 1:]:
                if not commutes(a, b):
                    raise CodeError(f"{self.name}: generators {a} and {b} anticommute")
        if len(_echelon(_symplectic_row(g) for g in self.generators)) != self.n - self.k:
            raise CodeError(f"{self.name}: generators are dependent")
        for lo in self.logical_x + self.logical_z:
            if lo.phase % 2:
                raise CodeError(f"{self.name}: logical {lo} is not Hermitian")
            for g in self.generators:
                if not commutes(lo, g):
                    raise CodeError(f"{self.name}: logical {lo} anticommutes with {g}")
        for i, lx in enumerate(self.logical_x):
            for j, lz in enumerate(self.logical_z):
                if commutes(lx, lz) == (i == j):
                    raise CodeError(f"{self.name}: bad logical pairing ({i}, {j})")
            for j, lx2 in enumerate(self.logical_x):
                if not commutes(lx, lx2):
                    raise CodeError(f"{self.name}: logical X {i},{j} anticommute")
        for i, lz in enumerate(self.logical_z):
            for lz2 in self.logical_z:
                if not commutes(lz, lz2):
                    raise CodeError(f"{self.name}: logical Z {i} anticommutes")

    def logical_y(self, j: int) -> PauliOperator:
        """``i·X̄_j·Z̄_j``."""
        xz = multiply(self.logical_x[j], self.logical_z[j])
        return PauliOperator(xz.x, xz.z, xz.n, xz.phase + 1)


def _ops(strings: Iterable[str]) -> tuple[PauliOperator, ...]:
    return tuple(pauli_from_string(s) for s in strings)


def _indexed(letter: str, qubits: Iterable[int], n: int, negative: bool = False) -> PauliOperator:
    chars = ["I"] * n
    for q in qubits:
        chars[q - 1] = letter
    return pauli_from_string(("-" if negative else "") + "".join(chars))


_HAMMING_CHECKS = (
    "000000011111111",
    "000111100001111",
    "011001100110011",
    "101010101010101",
)
_HAMMING_LOGICALS = (
    "110100010000001",
    "110010000101000",
    "110001000010010",
    "110000101000100",
    "100101001100000",
    "100100100001010",
    "100000010100110",
)


def _qedc(n: int) -> StabilizerCode:
    if n < 4 or n % 2:
        raise CodeError(f"[[n,n-2,2]] needs even n >= 4, got {n}")
    lx = tuple(_indexed("X", (j, n - 1), n) for j in range(1, n - 1))
    lz = tuple(_indexed("Z", (j, n), n) for j in range(1, n - 1))
    return StabilizerCode(f"qedc:{n}", n, n - 2, 2, _ops(["X" * n, "Z" * n]), lx, lz)


def _five_1_3() -> StabilizerCode:
    return StabilizerCode(
        "five_1_3", 5, 1, 3,
        _ops(["XZZXI", "IXZZX", "XIXZZ", "ZZXIX"]),
        _ops(["-YIXIY"]), _ops(["-XIZIX"]),
    )


def _steane() -> StabilizerCode:
    gens = [(1, 2, 3, 4), (2, 3, 5, 6), (3, 4, 6, 7)]
    return StabilizerCode(
        "steane", 7, 1, 3,
        tuple(_indexed("X", g, 7) for g in gens) + tuple(_indexed("Z", g, 7) for g in gens),
        _ops(["IIIIXXX"]), _ops(["IIIIZZZ"]),
    )


def _hamming() -> StabilizerCode:
    def rows(letter, table):
        return tuple(pauli_from_string(r.replace("0", "I").replace("1", letter)) for r in table)

    return StabilizerCode(
        "hamming_15_7", 15, 7, 3,
        rows("X", _HAMMING_CHECKS) + rows("Z", _HAMMING_CHECKS),
        rows("X", _HAMMING_LOGICALS), rows("Z", _HAMMING_LOGICALS),
    )


_ALIASES = {
    "five_1_3": "five_1_3", "513": "five_1_3", "perfect": "five_1_3",
    "steane": "steane", "713": "steane",
    "hamming": "hamming_15_7", "hamming_15_7": "hamming_15_7", "1573": "hamming_15_7",
}


def build_code(name: str, n: int | None = None) -> StabilizerCode:
    """Built-in codes: ``qedc`` (with ``n`` or as ``"qedc:6"``), ``five_1_3``,
    ``steane`` and ``hamming_15_7``."""
    key = name.strip().lower()
    if key.startswith("qedc"):
        if ":" in key:
            n = int(key.split(":", 1)[1])
        if n is None:
            raise CodeError("qedc needs a block size n")
        code = _qedc(n)
    elif key in _ALIASES:
        code = {"five_1_3": _five_1_3, "steane": _steane, "hamming_15_7": _hamming}[_ALIASES[key]]()
    else:
        raise CodeError(f"unknown code {name!r}")
    return code


def parse_logical_label(label: str, k: int) -> tuple[int, str]:
    """Turn ``"Z1Z2"``/``"-X3"`` or a length-``k`` string into ``(phase, letters)``."""
    s = label.strip()
    phase = 0
    if s[:1] in "+-":
        phase = 2 if s[0] == "-" else 0
        s = s[1:]
    if any(ch.isdigit() for ch in s):
        letters = ["I"] * k
        i = 0
        while i < len(s):
            ch = s[i].upper()
            if ch not in "XYZ":
                raise CodeError(f"bad logical label {label!r}")
            j = i + 1
            while j < len(s) and s[j].isdigit():
                j += 1
            if j == i + 1:
                raise CodeError(f"missing index in logical label {label!r}")
            q = int(s[i + 1:j])
            if not 1 <= q <= k:
                raise CodeError(f"logical index {q} outside 1..{k}")
            if letters[q - 1] != "I":
                raise CodeError(f"logical qubit {q} repeated in {label!r}")
            letters[q - 1] = ch
            i = j
        return phase, "".join(letters)
    if len(s) != k or any(ch.upper() not in "IXYZ" for ch in s):
        raise CodeError(f"logical label {label!r} must have {k} letters from IXYZ")
    return phase, s.upper()


def logical_rep(code: StabilizerCode, label: str) -> PauliOperator:
    """Physical representative of a logical Pauli label."""
    phase, letters = parse_logical_label(label, code.k)
    out = PauliOperator(0, 0, code.n, phase)
    for j, ch in enumerate(letters):
        if ch == "X":
            out = multiply(out, code.logical_x[j])
        elif ch == "Z":
            out = multiply(out, code.logical_z[j])
        elif ch == "Y":
            out = multiply(out, code.logical_y(j))
    return out


@dataclass(frozen=True)
class DetectionContext:
    """Checks measured at the end of a circuit, over one or more code blocks.

    ``check_operators`` are the block generators followed by one check per
    ancilla; ``stabilizer_group_basis`` holds the block generators only.
    """

    code: StabilizerCode
    blocks: int
    total_qubits: int
    check_operators: tuple[PauliOperator, ...]
    stabilizer_group_basis: tuple[PauliOperator, ...]
    logical_operators: tuple[PauliOperator, ...]
    ancillas: tuple[tuple[int, str], ...] = ()
    block_map: dict = field(default_factory=dict, compare=False, hash=False)

    @property
    def data_qubits(self) -> int:
        return self.blocks * self.code.n

    @property
    def data_mask(self) -> int:
        return (1 << self.data_qubits) - 1

    @cached_property
    def _group_pivots(self) -> dict[int, int]:
        return _echelon(_symplectic_row(s) for s in self.stabilizer_group_basis)

    def in_stabilizer_group(self, e: PauliOperator) -> bool:
        return _reduce(_symplectic_row(e), self._group_pivots) == 0

    def with_ancillas(self, ancillas: Sequence[tuple[int, str]]) -> "DetectionContext":
        """Context over the same blocks but with the given ancilla checks."""
        return multi_block_context(self.code, self.blocks, ancillas)

    def for_circuit(self, circuit) -> "DetectionContext":
        """Adapt to a circuit's ancilla markers (prep basis = check basis)."""
        anc = tuple(sorted(circuit.ancillas.items()))
        if anc == self.ancillas and circuit.n_qubits == self.total_qubits:
            return self
        cache = self.__dict__.setdefault("_adapted", {})
        if anc in cache:
            return cache[anc]
        if circuit.n_qubits != self.data_qubits + len(anc):
            raise DimensionError(
                f"circuit has {circuit.n_qubits} qubits, context expects "
                f"{self.data_qubits} data qubits plus {len(anc)} ancillas"
            )
        cache[anc] = adapted = self.with_ancillas(anc)
        return adapted


def multi_block_context(
    code: StabilizerCode, blocks: int = 1, ancillas: Sequence[tuple[int, str]] = ()
) -> DetectionContext:
    if blocks < 1:
        raise CodeError("need at least one block")
    data = blocks * code.n
    total = data + len(ancillas)
    seen = set()
    for q, basis in ancillas:
        if q in seen:
            raise CodeError(f"ancilla index {q} listed twice")
        if q < data or q >= total:
            raise CodeError(f"ancilla {q} must sit in {data}..{total - 1} after the blocks")
        if basis not in ("X", "Y", "Z"):
            raise CodeError(f"bad ancilla basis {basis!r}")
        seen.add(q)
    gens = tuple(g.embed(total, b * code.n) for b in range(blocks) for g in code.generators)
    logicals = tuple(
        lo.embed(total, b * code.n)
        for b in range(blocks)
        for lo in code.logical_x + code.logical_z
    )
    anc_checks = tuple(single_qubit_pauli(basis, q, total) for q, basis in ancillas)
    block_map = {b * code.n + i: (b, i) for b in range(blocks) for i in range(code.n)}
    block_map.update({q: ("ancilla", basis) for q, basis in ancillas})
    return DetectionContext(
        code=code,
        blocks=blocks,
        total_qubits=total,
        check_operators=gens + anc_checks,
        stabilizer_group_basis=gens,
        logical_operators=logicals,
        ancillas=tuple(sorted(ancillas)),
        block_map=block_map,
    )


def syndrome(ctx: DetectionContext, e: PauliOperator) -> list[int]:
    if e.n != ctx.total_qubits:
        raise DimensionError(f"error on {e.n} qubits, context has {ctx.total_qubits}")
    return [0 if commutes(e, c) else 1 for c in ctx.check_operators]


def classify_residual(ctx: DetectionContext, e: PauliOperator, analog_flag: bool = False) -> Classification:
    if any(syndrome(ctx, e)):
        return Classification.DETECTED
    if analog_flag:
        return Classification.LOGICAL
    # Undetected ancilla components are I or the prep basis: trivial on the
    # postselected ancilla state, so only the data part is classified.
    data = e.restrict(ctx.data_mask)
    return Classification.BENIGN if ctx.in_stabilizer_group(data) else Classification.LOGICAL


# -- code-definition files ---------------------------------------------------

def dump_code(code: StabilizerCode, path: str | Path | None = None) -> str:
    doc = {
        "name": code.name,
        "n": code.n,
        "k": code.k,
        "d": code.d,
        "generators": [str(g) for g in code.generators],
        "logical_x": [str(p) for p in code.logical_x],
        "logical_z": [str(p) for p in code.logical_z],
    }
    text = json.dumps(doc, indent=2) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


def load_code(source: str | Path) -> StabilizerCode:
    """Read a code-definition file (JSON with name, n, k, d, generators, logical_x, logical_z)."""
    path = Path(source)
    text = path.read_text() if path.exists() else str(source)
    try:
        doc = json.loads(text)
        code = StabilizerCode(
            name=doc["name"], n=int(doc["n"]), k=int(doc["k"]), d=int(doc["d"]),
            generators=_ops(doc["generators"]),
            logical_x=_ops(doc["logical_x"]),
            logical_z=_ops(doc["logical_z"]),
        )
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise CodeError(f"malformed code definition: {exc}") from exc
    code.validate()
    return code
