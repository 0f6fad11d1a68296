"""Bit-packed Pauli operators.

A PauliString stores the X/Z support of an n-qubit Pauli as Python integers
(arbitrary-precision bitmasks, word-parallel under the hood) together with a
global phase exponent.  The internal normal form is

    P = i**phase * X^xmask * Z^zmask

where ``X^m`` means the tensor product of X on every qubit set in ``m``.
Qubit q carries X iff x only, Z iff z only, Y iff both.  Phases are tracked
mod 4 so that products get the +-1 sign right; the Hermitian sign is exposed
through :attr:`PauliString.sign`.
"""

from __future__ import annotations

from dataclasses import dataclass

_PAULI_CHARS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_CHAR_OF = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}


@dataclass(frozen=True)
class PauliString:
    """Immutable n-qubit Pauli with phase.

    ``phase`` is the exponent of i in the X..Z normal form above.  For the
    Hermitian operators users normally build (tensor products of I/X/Y/Z with
    a +-1 sign) ``phase - weight_y`` is even.
    """

    n: int
    x: int = 0
    z: int = 0
    phase: int = 0

    def __post_init__(self):
        mask = (1 << self.n) - 1
        if self.x & ~mask or self.z & ~mask:
            raise ValueError("mask has bits outside the %d-qubit register" % self.n)
        object.__setattr__(self, "phase", self.phase & 3)

    # -- constructors -------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n)

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """Parse e.g. ``"+XIZY"`` or ``"-ZZ"`` (leftmost char is qubit 0)."""
        sign = 1
        if label and label[0] in "+-":
            sign = -1 if label[0] == "-" else 1
            label = label[1:]
        x = z = 0
        for q, ch in enumerate(label):
            try:
                xb, zb = _PAULI_CHARS[ch.upper()]
            except KeyError:
                raise ValueError("bad Pauli character %r" % ch) from None
            x |= xb << q
            z |= zb << q
        n_y = bin(x & z).count("1")
        phase = (n_y + (2 if sign < 0 else 0)) & 3
        return cls(len(label), x, z, phase)

    @classmethod
    def single(cls, n: int, q: int, kind: str, sign: int = 1) -> "PauliString":
        xb, zb = _PAULI_CHARS[kind]
        phase = ((xb & zb) + (2 if sign < 0 else 0)) & 3
        return cls(n, xb << q, zb << q, phase)

    @classmethod
    def from_supports(cls, n: int, x_support=(), z_support=(), sign: int = 1) -> "PauliString":
        x = z = 0
        for q in x_support:
            x |= 1 << q
        for q in z_support:
            z |= 1 << q
        n_y = bin(x & z).count("1")
        return cls(n, x, z, (n_y + (2 if sign < 0 else 0)) & 3)

    # -- views ---------------------------------------------------------

    @property
    def sign(self) -> int:
        """Hermitian sign: P = sign * (tensor of I/X/Y/Z factors)."""
        n_y = bin(self.x & self.z).count("1")
        d = (self.phase - n_y) & 3
        if d == 0:
            return 1
        if d == 2:
            return -1
        raise ValueError("Pauli carries an imaginary phase; sign undefined")

    @property
    def weight(self) -> int:
        return bin(self.x | self.z).count("1")

    def kind_at(self, q: int) -> str:
        return _CHAR_OF[((self.x >> q) & 1, (self.z >> q) & 1)]

    def label(self) -> str:
        body = "".join(self.kind_at(q) for q in range(self.n))
        return ("+" if self.sign > 0 else "-") + body

    def __repr__(self):
        try:
            return "PauliString(%r)" % self.label()
        except ValueError:
            return "PauliString(n=%d, x=%#x, z=%#x, phase=%d)" % (
                self.n, self.x, self.z, self.phase)

    # -- algebra --------------------------------------------------------

    def __mul__(self, other: "PauliString") -> "PauliString":
        return pauli_mul(self, other)

    def commutes_with(self, other: "PauliString") -> bool:
        return commutes(self, other)


def pauli_mul(a: PauliString, b: PauliString) -> PauliString:
    """Group product a*b with exact phase bookkeeping.

    Moving b's X block past a's Z block picks up (-1)^|a.z & b.x|, which is
    the only phase correction needed in the i^phase X^x Z^z normal form.
    """
    if a.n != b.n:
        raise ValueError("length mismatch: %d vs %d" % (a.n, b.n))
    phase = (a.phase + b.phase + 2 * bin(a.z & b.x).count("1")) & 3
    return PauliString(a.n, a.x ^ b.x, a.z ^ b.z, phase)


def commutes(a: PauliString, b: PauliString) -> bool:
    """Symplectic inner product test: True iff a and b commute."""
    if a.n != b.n:
        raise ValueError("length mismatch: %d vs %d" % (a.n, b.n))
    return (bin(a.x & b.z).count("1") + bin(a.z & b.x).count("1")) % 2 == 0


# -- Clifford conjugation ----------------------------------------------
#
# Single Pauli conjugation g P g^dag for the unitary gate kinds.  The mask
# updates below are the standard symplectic rules; the phase corrections are
# exhaustively checked against dense matrices in the test suite.

def _bits(v: int, q: int) -> int:
    return (v >> q) & 1


def conjugate(p: PauliString, gate) -> PauliString:
    """Propagate p through gate: returns g p g^dagger.

    ``gate`` is a circuit op (see :mod:`mbftqc.circuit`); only unitary
    Clifford kinds are accepted.
    """
    kind = gate.kind
    x, z, phase = p.x, p.z, p.phase
    if kind == "H":
        (q,) = gate.targets
        xb, zb = _bits(x, q), _bits(z, q)
        phase = (phase + 2 * (xb & zb)) & 3
        x ^= (xb ^ zb) << q
        z ^= (xb ^ zb) << q
    elif kind == "S":
        (q,) = gate.targets
        xb = _bits(x, q)
        z ^= xb << q
        phase = (phase + xb) & 3
    elif kind == "S_DAG":
        (q,) = gate.targets
        xb = _bits(x, q)
        z ^= xb << q
        phase = (phase - xb) & 3
    elif kind == "X":
        (q,) = gate.targets
        phase = (phase + 2 * _bits(z, q)) & 3
    elif kind == "Y":
        (q,) = gate.targets
        phase = (phase + 2 * (_bits(x, q) ^ _bits(z, q))) & 3
    elif kind == "Z":
        (q,) = gate.targets
        phase = (phase + 2 * _bits(x, q)) & 3
    elif kind == "CNOT":
        # images of the X and Z generator parts stay normal ordered, so the
        # i^phase X^x Z^z form picks up no phase at all
        c, t = gate.targets
        xc = _bits(x, c)
        zt = _bits(z, t)
        x ^= xc << t
        z ^= zt << c
    elif kind == "CZ":
        # conj(X_c X_t) = (X_c Z_t)(Z_c X_t) needs one Z-past-X swap
        c, t = gate.targets
        xc, xt = _bits(x, c), _bits(x, t)
        phase = (phase + 2 * (xc & xt)) & 3
        z ^= xc << t
        z ^= xt << c
    else:
        raise ValueError("cannot conjugate through non-unitary op %r" % kind)
    return PauliString(p.n, x, z, phase)
