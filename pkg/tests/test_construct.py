import math

import pytest

from stabexp.circuit import preserves_codespace, realized_pauli, validate_circuit
from stabexp.codes import build_code, logical_rep, multi_block_context
from stabexp.construct import (
    ConstructionError,
    add_ancilla,
    base_count,
    candidate_count,
    candidate_set,
    generate_base,
    iter_candidates,
    iter_indexed_candidates,
    staircase,
    transversal_multiblock,
)
from stabexp.pauli import pauli_from_string


@pytest.mark.parametrize("kind", "XYZ")
@pytest.mark.parametrize("N", [1, 2, 3, 4, 5])
def test_base_family_size(kind, N):
    bases = generate_base(kind, N)
    assert len(bases) == base_count(kind, N)
    assert len(bases) == (math.factorial(N) if kind == "Y" else math.factorial(N - 1))
    assert len({b.circuit for b in bases}) == len(bases)


@pytest.mark.parametrize("kind", "XYZ")
def test_base_circuits_realize_their_pattern(kind):
    for b in generate_base(kind, 4):
        assert realized_pauli(b.circuit).letters() == b.pattern
        assert b.circuit.rotation.qubits == (3,)
        assert b.circuit.cnot_count == 6


@pytest.mark.parametrize("code,label,n_a,bases,count", [
    ("qedc:4", "X1", 0, "XYZ", 4), ("qedc:4", "X1", 1, "XYZ", 30),
    ("qedc:4", "Z2", 0, "XYZ", 4), ("qedc:4", "Z2", 1, "XYZ", 30),
    ("qedc:4", "Y1", 0, "XYZ", 10), ("qedc:4", "Y1", 1, "XYZ", 144),
    ("qedc:6", "Z1Z2Z3Z4", 0, "Z", 6), ("qedc:6", "Z1Z2Z3Z4", 1, "Z", 120),
    ("qedc:8", "Z1Z2Z3Z4Z5Z6", 0, "Z", 120), ("qedc:8", "Z1Z2Z3Z4Z5Z6", 1, "Z", 5040),
    ("qedc:10", "Z1Z2Z3Z4Z5Z6Z7Z8", 0, "Z", 5040),
    ("five_1_3", "Z1", 0, "XYZ", 10), ("steane", "Z1", 0, "XYZ", 10),
    ("hamming", "Z1", 0, "Z", 24),
])
def test_candidate_counts(code, label, n_a, bases, count):
    target = logical_rep(build_code(code), label)
    assert candidate_count(target.weight, n_a, bases) == count
    if count <= 5040:
        assert sum(1 for _ in iter_candidates(target, n_a, bases)) == count


def test_largest_count_is_closed_form():
    assert candidate_count(8, 1, "Z") == 362880


@pytest.mark.parametrize("label,n_a", [("X1", 1), ("Y1", 1), ("Y2", 0), ("Z1Z2", 1)])
def test_every_candidate_realizes_target(label, n_a):
    code = build_code("qedc:4")
    target = logical_rep(code, label)
    ctx = multi_block_context(code)
    for c in iter_candidates(target, n_a):
        validate_circuit(c)
        p = realized_pauli(c)
        assert p.resize(code.n).unsigned() == target.unsigned()
        assert c.n_qubits == code.n + n_a
        assert preserves_codespace(c, ctx)


def test_shards_partition_the_candidates():
    target = logical_rep(build_code("qedc:6"), "Z1Z2Z3Z4")
    full = list(iter_indexed_candidates(target, 1, "Z"))
    assert [pos for pos, _ in full] == list(range(len(full)))
    merged = sorted(x for k in range(3) for x in iter_indexed_candidates(target, 1, "Z", (k, 3)))
    assert [pos for pos, _ in merged] == [pos for pos, _ in full]
    assert [c for _, c in merged] == [c for _, c in full]


def test_add_ancilla_errors():
    b = generate_base("Z", 3)[0]
    with pytest.raises(ConstructionError):
        add_ancilla(b, 3)
    with pytest.raises(ConstructionError):
        add_ancilla(b, [0, 0])
    with pytest.raises(ConstructionError):
        add_ancilla(b, [0, 1, 2])
    c = add_ancilla(b, 0)
    assert c.ancillas == {0: "Z"}


def test_bad_inputs():
    with pytest.raises(ConstructionError):
        generate_base("W", 3)
    with pytest.raises(ConstructionError):
        list(iter_candidates(pauli_from_string("II")))
    with pytest.raises(ConstructionError):
        list(iter_candidates(pauli_from_string("ZZ"), 0, "Q"))
    with pytest.raises(ConstructionError):
        staircase(pauli_from_string("III"))


@pytest.mark.parametrize("target", ["ZZZZ", "XIYZ", "-YXI", "IIZ"])
def test_staircase(target):
    tp = pauli_from_string(target)
    c = staircase(tp)
    assert realized_pauli(c).unsigned() == tp.unsigned()
    assert c.cnot_count == 2 * (tp.weight - 1)


@pytest.mark.parametrize("code", ["five_1_3", "steane"])
@pytest.mark.parametrize("w", [2, 3, 4, 5])
def test_transversal_multiblock(code, w):
    cd = build_code(code)
    c = transversal_multiblock(cd, w)
    assert c.n_qubits == w * cd.n
    assert c.cnot_count == 6 * (w - 1) + 4
    expect = None
    for b in range(w):
        z = cd.logical_z[0].embed(w * cd.n, b * cd.n)
        expect = z if expect is None else expect * z
    assert realized_pauli(c).unsigned() == expect.unsigned()
    assert preserves_codespace(c, multi_block_context(cd, w))


def test_transversal_rejects_other_codes():
    with pytest.raises(ConstructionError):
        transversal_multiblock(build_code("hamming"), 2)
    with pytest.raises(ConstructionError):
        transversal_multiblock(build_code("steane"), 1)


def test_enumeration_is_deterministic():
    target = logical_rep(build_code("qedc:4"), "Y1")
    assert candidate_set(target, 1) == candidate_set(target, 1)
