"""Circuit text format: round trips, rejection diagnostics."""

import pytest

from mbftqc.circuit import Circuit
from mbftqc.pauli import PauliString


def _sample_circuit():
    c = Circuit(4)
    c.append("PREP_Z", 0)
    c.append("PREP_X", 1)
    c.append("H", 2)
    c.append("S", 3)
    c.append("S_DAG", 3)
    c.append("CNOT", 0, 1)
    c.append("CZ", 2, 3)
    c.depolarize1(2, 0.001)
    c.depolarize2(0, 1, 0.002)
    c.pauli_channel1(3, 0.0004, 0.000133, 0.000133)
    c.prep_logical("steane", "zero", (0, 1, 2, 3))  # size-agnostic payload
    s0 = c.measure(0, "Z", label="a")
    s1 = c.measure(1, "X")
    chk = c.check(PauliString.from_label("-ZZII"), label="v")
    c.probe(2)
    c.detector("par", (s0, s1))
    c.decode_group("g", "steane", ("Z",), (((s0,), (s1,), (chk,)),), (s0,))
    c.correct("g", PauliString.from_label("+IXII"))
    return c


def test_roundtrip_lossless():
    c = _sample_circuit()
    text = c.to_text()
    back = Circuit.from_text(text)
    assert back.to_text() == text
    assert back.n_slots == c.n_slots
    assert back.detectors == c.detectors
    assert set(back.decode_groups) == set(c.decode_groups)


def test_pauli_error_sugar():
    c = Circuit(1)
    c.append("PREP_Z", 0)
    back = Circuit.from_text("QUBITS 1\nPREP_Z 0\nPAULI_ERROR(X,0.001) 0\n")
    op = back.ops[-1]
    assert op.kind == "PAULI_CHANNEL1"
    assert op.arg == (0.001, 0.0, 0.0)


def test_parser_rejects_with_line_numbers():
    with pytest.raises(ValueError, match="line 2"):
        Circuit.from_text("QUBITS 2\nFROB 0\n")
    with pytest.raises(ValueError, match="line 3"):
        Circuit.from_text("QUBITS 2\nH 0\nCNOT 0\n")
    with pytest.raises(ValueError, match="line 1"):
        Circuit.from_text("H 0\n")
    with pytest.raises(ValueError, match="unknown decode group"):
        Circuit.from_text("QUBITS 1\nCORRECT[g] X0\n")


def test_comments_and_blank_lines():
    text = "# header\nQUBITS 2\n\nH 0   # inline comment\nCNOT 0 1\n"
    c = Circuit.from_text(text)
    assert [op.kind for op in c.ops] == ["H", "CNOT"]


def test_target_validation():
    c = Circuit(2)
    with pytest.raises(ValueError):
        c.append("H", 5)
    with pytest.raises(ValueError):
        c.append("CNOT", 1, 1)
    with pytest.raises(ValueError):
        c.depolarize1(0, 1.5)
    with pytest.raises(ValueError):
        c.detector("d", (3,))
