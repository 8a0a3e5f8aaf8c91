"""Exact n-qubit Pauli operators in packed binary-symplectic form.

An operator is stored as two integer bitmasks (bit ``q`` is qubit ``q``,
0-based) plus a phase exponent: the operator equals
``i**phase * P_0 ⊗ P_1 ⊗ ... ⊗ P_{n-1}`` where each ``P_q`` is I, X, Y or Z
according to the bit pair ``(x_q, z_q)`` and Y means the Hermitian Y (not XZ).

String notation puts qubit 0 leftmost, so ``"XZZXI"`` has X on qubit 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "PauliOperator",
    "PauliParseError",
    "DimensionError",
    "pauli_from_string",
    "commutes",
    "multiply",
    "conjugate_by_gate",
    "single_qubit_pauli",
]

_LETTERS = "IXZY"  # index = x | (z << 1)


class PauliParseError(ValueError):
    """Malformed Pauli string."""

    def __init__(self, text: str, position: int, message: str):
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position} in {text!r}")


class DimensionError(ValueError):
    """Operands live on different numbers of qubits."""


def _popcount(v: int) -> int:
    return bin(v).count("1")


@dataclass(frozen=True)
class PauliOperator:
    x: int
    z: int
    n: int
    phase: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("qubit count must be non-negative")
        mask = (1 << self.n) - 1
        if self.x & ~mask or self.z & ~mask:
            raise ValueError("support bits outside the register")
        object.__setattr__(self, "phase", self.phase % 4)

    # -- views -----------------------------------------------------------
    @property
    def phase_exponent(self) -> int:
        return self.phase

    @property
    def x_part(self) -> np.ndarray:
        return np.array([(self.x >> q) & 1 for q in range(self.n)], dtype=np.uint8)

    @property
    def z_part(self) -> np.ndarray:
        return np.array([(self.z >> q) & 1 for q in range(self.n)], dtype=np.uint8)

    @property
    def support(self) -> int:
        return self.x | self.z

    @property
    def weight(self) -> int:
        return _popcount(self.x | self.z)

    def support_indices(self) -> list[int]:
        s = self.x | self.z
        return [q for q in range(self.n) if (s >> q) & 1]

    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    def component(self, q: int) -> str:
        return _LETTERS[((self.x >> q) & 1) | (((self.z >> q) & 1) << 1)]

    def letters(self) -> str:
        return "".join(self.component(q) for q in range(self.n))

    def unsigned(self) -> "PauliOperator":
        return PauliOperator(self.x, self.z, self.n, 0)

    def sign(self) -> complex:
        return (1, 1j, -1, -1j)[self.phase]

    def __str__(self) -> str:
        prefix = ("", "+i", "-", "-i")[self.phase]
        return prefix + self.letters()

    def __repr__(self) -> str:
        return f"PauliOperator({str(self)!r})"

    # -- register surgery ------------------------------------------------
    def embed(self, n_total: int, offset: int = 0) -> "PauliOperator":
        """Place this operator on qubits ``offset .. offset+n-1`` of a larger register."""
        if offset + self.n > n_total:
            raise DimensionError(f"cannot embed {self.n} qubits at {offset} into {n_total}")
        return PauliOperator(self.x << offset, self.z << offset, n_total, self.phase)

    def restrict(self, keep_mask: int) -> "PauliOperator":
        """Drop every component outside ``keep_mask`` (phase kept as is)."""
        return PauliOperator(self.x & keep_mask, self.z & keep_mask, self.n, self.phase)

    def resize(self, n_total: int) -> "PauliOperator":
        if n_total < self.n and (self.support >> n_total):
            raise DimensionError("truncation would drop support")
        return PauliOperator(self.x, self.z, n_total, self.phase)

    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        return multiply(self, other)


def single_qubit_pauli(letter: str, q: int, n: int, phase: int = 0) -> PauliOperator:
    idx = _LETTERS.index(letter)
    return PauliOperator((idx & 1) << q, ((idx >> 1) & 1) << q, n, phase)


def pauli_from_string(s: str) -> PauliOperator:
    """Parse ``[+|-]`` followed by one of ``IXYZ`` per qubit."""
    if not s:
        raise PauliParseError(s, 0, "empty Pauli string")
    body, phase, start = s, 0, 0
    if s[0] in "+-":
        phase = 2 if s[0] == "-" else 0
        body, start = s[1:], 1
        if not body:
            raise PauliParseError(s, 1, "missing Pauli letters")
    x = z = 0
    for q, ch in enumerate(body):
        try:
            idx = _LETTERS.index(ch.upper())
        except ValueError:
            raise PauliParseError(s, start + q, f"invalid character {ch!r}") from None
        x |= (idx & 1) << q
        z |= ((idx >> 1) & 1) << q
    return PauliOperator(x, z, len(body), phase)


def _check_dims(a: PauliOperator, b: PauliOperator) -> None:
    if a.n != b.n:
        raise DimensionError(f"qubit counts differ: {a.n} vs {b.n}")


def commutes(a: PauliOperator, b: PauliOperator) -> bool:
    _check_dims(a, b)
    return (_popcount(a.x & b.z) + _popcount(a.z & b.x)) % 2 == 0


def multiply(a: PauliOperator, b: PauliOperator) -> PauliOperator:
    """Exact product ``a·b`` including the phase."""
    _check_dims(a, b)
    # Move to the X^x Z^z form (Y = iXZ), multiply there, move back.
    r = a.phase + _popcount(a.x & a.z) + b.phase + _popcount(b.x & b.z)
    r += 2 * _popcount(a.z & b.x)
    x, z = a.x ^ b.x, a.z ^ b.z
    return PauliOperator(x, z, a.n, r - _popcount(x & z))


def conjugate_by_gate(p: PauliOperator, gate) -> PauliOperator:
    """Return ``g p g†`` for a Clifford gate.

    ``gate`` is anything with ``op`` and ``qubits`` attributes (see
    :class:`stabexp.circuit.Gate`).  Supported ops: ``CNOT``, ``H``,
    ``SX+``/``SX-`` (exp(∓iπX/4)) and ``SZ+``/``SZ-`` (exp(∓iπZ/4)).
    """
    op, qs = gate.op, gate.qubits
    for q in qs:
        if not 0 <= q < p.n:
            raise IndexError(f"qubit {q} out of range for {p.n}-qubit operator")
    x, z, ph = p.x, p.z, p.phase
    if op == "CNOT":
        c, t = qs
        xc, zc, xt, zt = (x >> c) & 1, (z >> c) & 1, (x >> t) & 1, (z >> t) & 1
        ph += 2 * (xc & zt & (xt ^ zc ^ 1))
        x ^= xc << t
        z ^= zt << c
        return PauliOperator(x, z, p.n, ph)
    (q,) = qs
    xq, zq = (x >> q) & 1, (z >> q) & 1
    if op == "H":
        ph += 2 * (xq & zq)
        x = (x & ~(1 << q)) | (zq << q)
        z = (z & ~(1 << q)) | (xq << q)
    elif op == "SZ+":  # X -> Y, Y -> -X
        ph += 2 * (xq & zq)
        z ^= xq << q
    elif op == "SZ-":  # X -> -Y, Y -> X
        ph += 2 * (xq & (zq ^ 1))
        z ^= xq << q
    elif op == "SX+":  # Z -> -Y, Y -> Z
        ph += 2 * (zq & (xq ^ 1))
        x ^= zq << q
    elif op == "SX-":  # Z -> Y, Y -> -Z
        ph += 2 * (zq & xq)
        x ^= zq << q
    else:
        raise ValueError(f"not a Clifford gate: {op}")
    return PauliOperator(x, z, p.n, ph)
