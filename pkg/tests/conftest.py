"""Dense-matrix helpers shared by the tests.

Qubit 0 is the most significant tensor factor, matching the string order.
"""

from functools import reduce

import numpy as np
import pytest

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.diag([1, -1]).astype(complex)
LETTER = {"I": I2, "X": X, "Y": Y, "Z": Z}
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def expm_pauli(P, angle):
    """exp(-i * angle * P) for an involutory P."""
    return np.cos(angle) * np.eye(len(P)) - 1j * np.sin(angle) * P


ONE_Q = {
    "H": H,
    "SX+": expm_pauli(X, np.pi / 4),
    "SX-": expm_pauli(X, -np.pi / 4),
    "SZ+": expm_pauli(Z, np.pi / 4),
    "SZ-": expm_pauli(Z, -np.pi / 4),
}


def dense(p):
    mats = [LETTER[p.component(q)] for q in range(p.n)]
    return p.sign() * reduce(np.kron, mats, np.eye(1, dtype=complex))


def embed_1q(U, q, n):
    mats = [U if j == q else I2 for j in range(n)]
    return reduce(np.kron, mats, np.eye(1, dtype=complex))


def cnot_matrix(c, t, n):
    dim = 2 ** n
    M = np.zeros((dim, dim), dtype=complex)
    for i in range(dim):
        bits = [(i >> (n - 1 - q)) & 1 for q in range(n)]
        if bits[c]:
            bits[t] ^= 1
        j = sum(b << (n - 1 - q) for q, b in enumerate(bits))
        M[j, i] = 1
    return M


def gate_matrix(g, n):
    if g.op == "CNOT":
        return cnot_matrix(*g.qubits, n)
    return embed_1q(ONE_Q[g.op], g.qubits[0], n)


@pytest.fixture(autouse=True)
def _no_worker_env(monkeypatch):
    monkeypatch.delenv("STABEXP_WORKERS", raising=False)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    verdicts = getattr(mod, "VERDICTS", None)
    if verdicts:
        terminalreporter.section("acceptance criteria")
        for n in sorted(verdicts):
            terminalreporter.write_line(verdicts[n])
