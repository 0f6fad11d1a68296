"""Pauli algebra: multiplication, commutation, Clifford conjugation.

The multiplication oracle below works with dense 2^n complex matrices, so
every bit-packed identity is checked against plain linear algebra.
"""

import itertools

import numpy as np
import pytest

from mbftqc.circuit import Op
from mbftqc.pauli import PauliString, commutes, conjugate, pauli_mul

I2 = np.eye(2)
MX = np.array([[0, 1], [1, 0]], dtype=complex)
MY = np.array([[0, -1j], [1j, 0]])
MZ = np.array([[1, 0], [0, -1]], dtype=complex)
MATS = {"I": I2, "X": MX, "Y": MY, "Z": MZ}


def dense(p: PauliString) -> np.ndarray:
    m = np.array([[1.0 + 0j]])
    for q in range(p.n):
        m = np.kron(MATS[p.kind_at(q)], m)   # qubit 0 = least significant
    phase = 1j ** ((p.phase - bin(p.x & p.z).count("1")) % 4)
    return phase * m


def all_paulis(n):
    for labels in itertools.product("IXYZ", repeat=n):
        for sign in "+-":
            yield PauliString.from_label(sign + "".join(labels))


def test_label_roundtrip():
    for lbl in ("+XIZY", "-ZZ", "+IIII", "-Y"):
        assert PauliString.from_label(lbl).label() == lbl


def test_self_inverse_products():
    x1 = PauliString.from_label("XI")
    assert pauli_mul(x1, x1).label() == "+II"
    xz = pauli_mul(PauliString.from_label("X"), PauliString.from_label("Z"))
    # X Z = -iY: imaginary phase, but (XZ)^2 = -I exactly
    with pytest.raises(ValueError):
        xz.sign
    assert pauli_mul(xz, xz).label() == "-I"


def test_mul_matches_dense_exhaustive_2q():
    for a in all_paulis(2):
        da = dense(a)
        for b in all_paulis(2):
            prod = pauli_mul(a, b)
            assert np.allclose(dense(prod), da @ dense(b))


def test_mul_identity_and_associativity_3q():
    rng = np.random.default_rng(11)
    ident = PauliString.identity(3)
    ps = list(all_paulis(3))
    for _ in range(300):
        a, b, c = (ps[rng.integers(len(ps))] for _ in range(3))
        assert pauli_mul(a, ident) == a
        assert pauli_mul(pauli_mul(a, b), c) == pauli_mul(a, pauli_mul(b, c))
        # a (a b) = (a a) b: recovers +-b with the sign of a^2
        lhs = pauli_mul(a, pauli_mul(a, b))
        rhs = pauli_mul(pauli_mul(a, a), b)
        assert lhs == rhs
        assert (lhs.x, lhs.z) == (b.x, b.z)


def test_mul_random_23_qubit():
    rng = np.random.default_rng(5)
    mask = (1 << 23) - 1
    for _ in range(50):
        a = PauliString(23, int(rng.integers(0, 1 << 23)) & mask,
                        int(rng.integers(0, 1 << 23)) & mask,
                        int(rng.integers(4)))
        b = PauliString(23, int(rng.integers(0, 1 << 23)),
                        int(rng.integers(0, 1 << 23)), int(rng.integers(4)))
        back = pauli_mul(a, pauli_mul(a, b))
        assert (back.x, back.z) == (b.x, b.z)


def test_mul_length_mismatch():
    with pytest.raises(ValueError):
        pauli_mul(PauliString.identity(2), PauliString.identity(3))
    with pytest.raises(ValueError):
        commutes(PauliString.identity(2), PauliString.identity(3))


def test_commutes_examples():
    assert commutes(PauliString.from_label("XXXX"),
                    PauliString.from_label("IIZZ"))
    assert commutes(PauliString.from_label("ZIZI"),
                    PauliString.from_label("IIZZ"))
    assert not commutes(PauliString.from_label("XXXX"),
                        PauliString.from_label("IIXZ"))
    for p in all_paulis(2):
        assert commutes(p, p)


def test_commutes_matches_dense():
    for a in all_paulis(2):
        da = dense(a)
        for b in all_paulis(2):
            db = dense(b)
            assert commutes(a, b) == np.allclose(da @ db, db @ da)


GATE_MATS = {
    ("H",): np.array([[1, 1], [1, -1]]) / np.sqrt(2),
    ("S",): np.diag([1, 1j]),
    ("S_DAG",): np.diag([1, -1j]),
    ("X",): MX, ("Y",): MY, ("Z",): MZ,
}


def _two_qubit_unitary(kind):
    # qubit 0 is the least significant axis, matching dense()
    cnot_ct = np.zeros((4, 4))
    for c in range(2):
        for t in range(2):
            cnot_ct[(t ^ c) * 2 + c, t * 2 + c] = 1
    if kind == "CNOT":
        return cnot_ct
    return np.diag([1, 1, 1, -1]) if kind == "CZ" else None


def test_conjugate_matches_dense():
    for kind in ("H", "S", "S_DAG", "X", "Y", "Z"):
        u = GATE_MATS[(kind,)]
        for p in all_paulis(1):
            got = conjugate(p, Op(kind, (0,)))
            assert np.allclose(dense(got), u @ dense(p) @ u.conj().T), (kind, p)
    for kind in ("CNOT", "CZ"):
        u = _two_qubit_unitary(kind)
        for p in all_paulis(2):
            got = conjugate(p, Op(kind, (0, 1)))
            assert np.allclose(dense(got), u @ dense(p) @ u.conj().T), (kind, p)


def test_conjugate_paper_examples():
    # X (x) I through CZ picks up Z on the partner; Z commutes through
    xi = PauliString.from_label("XI")
    assert conjugate(xi, Op("CZ", (0, 1))).label() == "+XZ"
    zi = PauliString.from_label("ZI")
    assert conjugate(zi, Op("CZ", (0, 1))).label() == "+ZI"
    assert conjugate(PauliString.from_label("X"), Op("H", (0,))).label() == "+Z"
    assert conjugate(PauliString.from_label("Z"), Op("H", (0,))).label() == "+X"


def test_conjugate_preserves_commutation():
    gates = [Op("H", (0,)), Op("S", (1,)), Op("CNOT", (0, 1)),
             Op("CZ", (1, 0)), Op("S_DAG", (0,))]
    rng = np.random.default_rng(3)
    ps = list(all_paulis(2))
    for g in gates:
        for _ in range(200):
            a, b = ps[rng.integers(len(ps))], ps[rng.integers(len(ps))]
            assert commutes(a, b) == commutes(conjugate(a, g), conjugate(b, g))


def test_conjugate_involutions():
    ps = list(all_paulis(2))
    for kind in ("H", "X", "Y", "Z", "CNOT", "CZ"):
        g = Op(kind, (0,) if kind in ("H", "X", "Y", "Z") else (0, 1))
        for p in ps:
            assert conjugate(conjugate(p, g), g) == p
    for p in ps:
        assert conjugate(conjugate(p, Op("S", (0,))), Op("S_DAG", (0,))) == p


def test_conjugate_rejects_nonunitary():
    with pytest.raises(ValueError):
        conjugate(PauliString.identity(1), Op("MEAS_Z", (0,)))
