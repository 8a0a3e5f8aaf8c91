import pytest

from stabexp.codes import (
    Classification,
    CodeError,
    build_code,
    classify_residual,
    dump_code,
    in_span,
    load_code,
    logical_rep,
    multi_block_context,
    parse_logical_label,
    syndrome,
)
from stabexp.pauli import pauli_from_string

CODES = ["qedc:4", "qedc:6", "qedc:10", "five_1_3", "steane", "hamming"]


@pytest.mark.parametrize("name", CODES)
def test_builtin_codes_validate(name):
    build_code(name).validate()


@pytest.mark.parametrize("name,n,k,d", [("qedc:8", 8, 6, 2), ("five_1_3", 5, 1, 3),
                                        ("steane", 7, 1, 3), ("hamming", 15, 7, 3)])
def test_parameters(name, n, k, d):
    c = build_code(name)
    assert (c.n, c.k, c.d) == (n, k, d)


def test_qedc_needs_even_n():
    with pytest.raises(CodeError):
        build_code("qedc:5")
    with pytest.raises(CodeError):
        build_code("qedc")
    with pytest.raises(CodeError):
        build_code("toric")


def test_five_qubit_generators_are_cyclic():
    gens = [str(g) for g in build_code("five_1_3").generators]
    shifts = {"XZZXI"[-k:] + "XZZXI"[:-k] for k in range(5)}
    assert set(gens) <= shifts


@pytest.mark.parametrize("label,weight", [
    ("Z4Z5Z6Z7", 4), ("Z1Z2", 6), ("Z5Z6Z7", 7), ("Z2Z3Z4Z5", 8),
    ("Z1Z2Z3Z4Z5", 9), ("Z1Z2Z3Z5Z6Z7", 10), ("Z1Z2Z3", 11), ("Z1Z2Z3Z4", 12), ("Z1", 5)])
def test_hamming_representative_weights(label, weight):
    assert logical_rep(build_code("hamming"), label).weight == weight


def test_d3_logical_z_weight_three():
    for name in ("five_1_3", "steane"):
        assert build_code(name).logical_z[0].weight == 3


def test_logical_y_is_hermitian_and_anticommutes():
    c = build_code("qedc:6")
    for j in range(c.k):
        y = c.logical_y(j)
        assert y.phase % 2 == 0
        assert in_span(y, [c.logical_x[j], c.logical_z[j]])


@pytest.mark.parametrize("label,k,expect", [
    ("Z1Z2", 3, (0, "ZZI")), ("-X3", 3, (2, "IIX")), ("XIZ", 3, (0, "XIZ")), ("y2", 2, (0, "IY"))])
def test_parse_logical_label(label, k, expect):
    assert parse_logical_label(label, k) == expect


@pytest.mark.parametrize("label", ["Z0", "Z4", "Z1Z1", "Q1", "Z", "XX"])
def test_parse_logical_label_errors(label):
    with pytest.raises(CodeError):
        parse_logical_label(label, 3)


def test_dump_load_round_trip(tmp_path):
    c = build_code("steane")
    path = tmp_path / "steane.json"
    dump_code(c, path)
    assert load_code(path) == c


def test_load_rejects_bad_code():
    text = ('{"name": "bad", "n": 2, "k": 1, "d": 1, "generators": ["XI"],'
            ' "logical_x": ["IX"], "logical_z": ["ZI"]}')
    with pytest.raises(CodeError):
        load_code(text)
    with pytest.raises(CodeError):
        load_code('{"name": "x"}')


def test_context_and_classification():
    code = build_code("qedc:4")
    ctx = multi_block_context(code, ancillas=[(4, "Z")])
    assert ctx.total_qubits == 5 and ctx.data_qubits == 4
    assert len(ctx.check_operators) == len(code.generators) + 1
    assert syndrome(ctx, pauli_from_string("XIIII")) != [0] * len(ctx.check_operators)
    assert classify_residual(ctx, pauli_from_string("XIIII")) is Classification.DETECTED
    assert classify_residual(ctx, pauli_from_string("XXXXI")) is Classification.BENIGN
    assert classify_residual(ctx, pauli_from_string("XXIII")) is Classification.LOGICAL
    # Undetected ancilla component in the prep basis is dropped.
    assert classify_residual(ctx, pauli_from_string("ZZZZZ")) is Classification.BENIGN
    assert classify_residual(ctx, pauli_from_string("ZZZZZ"), analog_flag=True) is Classification.LOGICAL


def test_context_rejects_bad_ancillas():
    code = build_code("qedc:4")
    with pytest.raises(CodeError):
        multi_block_context(code, ancillas=[(2, "Z")])
    with pytest.raises(CodeError):
        multi_block_context(code, ancillas=[(4, "Z"), (4, "X")])
    with pytest.raises(CodeError):
        multi_block_context(code, ancillas=[(4, "W")])
    with pytest.raises(CodeError):
        multi_block_context(code, blocks=0)


def test_multi_block_layout():
    ctx = multi_block_context(build_code("five_1_3"), blocks=3)
    assert ctx.total_qubits == 15
    assert len(ctx.check_operators) == 12
    assert ctx.block_map[7] == (1, 2)
