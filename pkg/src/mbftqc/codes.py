"""Steane [[7,1,3]] and Golay [[23,1,7]] codes with lookup-table decoding.

Both codes are self-dual CSS: one binary matrix checks both error types and
one lookup table decodes both syndromes.  The tables are total (every
syndrome has an entry) because the underlying classical codes are perfect,
so decoder failure cannot occur for these two codes; the failure signal is
kept in the interface for completeness.
"""

from __future__ import annotations

import io
import struct
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

from .pauli import PauliString
from .circuit import Circuit


class DecoderFailure(Exception):
    """Syndrome has no entry within the table's weight cap."""


@dataclass(frozen=True, eq=False)
class CssCode:
    name: str
    n: int
    k: int
    d: int
    h_x: np.ndarray          # (r, n) uint8, row space = X-type checks
    h_z: np.ndarray
    logical_x: PauliString
    logical_z: PauliString

    @property
    def n_checks(self) -> int:
        return self.h_x.shape[0]

    def row_masks(self, basis: str):
        h = self.h_x if basis == "X" else self.h_z
        return [_mask_of(r) for r in h]

    def logical_mask(self, basis: str) -> int:
        p = self.logical_x if basis == "X" else self.logical_z
        return p.x | p.z

    def check_text(self) -> str:
        lines = ["%s [[%d,%d,%d]]" % (self.name, self.n, self.k, self.d)]
        for i, row in enumerate(self.h_x):
            lines.append("H%-2d %s" % (i, "".join(map(str, row))))
        lines.append("LX  %s" % "".join("1" if (self.logical_x.x >> q) & 1 else "0"
                                        for q in range(self.n)))
        lines.append("LZ  %s" % "".join("1" if (self.logical_z.z >> q) & 1 else "0"
                                        for q in range(self.n)))
        return "\n".join(lines)


def _mask_of(row) -> int:
    m = 0
    for q, b in enumerate(row):
        if b:
            m |= 1 << q
    return m


@dataclass(frozen=True)
class LookupTable:
    """Minimal-weight correction per syndrome.

    support[s] is the corrected error's qubit bitmask, logical_overlap[s] the
    parity of its intersection with the logical support, valid[s] whether the
    syndrome was reached by a weight <= max_weight error.
    """

    max_weight: int
    support: np.ndarray          # (2^r,) int64 bitmasks
    logical_overlap: np.ndarray  # (2^r,) uint8
    valid: np.ndarray            # (2^r,) bool

    @property
    def n_entries(self) -> int:
        return int(self.valid.sum())


# -- code constructions ---------------------------------------------------

_STEANE_H = np.array([
    [1, 0, 1, 0, 1, 0, 1],
    [0, 1, 1, 0, 0, 1, 1],
    [0, 0, 0, 1, 1, 1, 1],
], dtype=np.uint8)


@lru_cache(maxsize=None)
def steane_code() -> CssCode:
    lx = PauliString.from_supports(7, x_support=(0, 1, 2))
    lz = PauliString.from_supports(7, z_support=(0, 1, 2))
    code = CssCode("steane", 7, 1, 3, _STEANE_H, _STEANE_H, lx, lz)
    _validate(code)
    return code


def _golay_parity_check() -> np.ndarray:
    # cyclic [23,12,7] code, generator polynomial
    # x^11 + x^10 + x^6 + x^5 + x^4 + x^2 + 1
    g = np.zeros(12, dtype=np.uint8)
    for e in (0, 2, 4, 5, 6, 10, 11):
        g[e] = 1
    gen = np.zeros((12, 23), dtype=np.uint8)
    for i in range(12):
        gen[i, i:i + 12] = g
    return _nullspace_gf2(gen)


def _nullspace_gf2(a: np.ndarray) -> np.ndarray:
    a = a.copy() % 2
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        hit = np.nonzero(a[r:, c])[0]
        if hit.size == 0:
            continue
        a[[r, r + hit[0]]] = a[[r + hit[0], r]]
        for rr in range(rows):
            if rr != r and a[rr, c]:
                a[rr] ^= a[r]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.uint8)
    for i, fc in enumerate(free):
        basis[i, fc] = 1
        for rr, pc in enumerate(pivots):
            if a[rr, fc]:
                basis[i, pc] = 1
    return basis


@lru_cache(maxsize=None)
def golay_code() -> CssCode:
    h = _golay_parity_check()
    # logical operator: minimum-weight codeword of the [23,12] code, fixed
    # deterministically (lowest bitmask among the weight-7 words)
    gen = _nullspace_gf2(h)
    assert gen.shape == (12, 23)
    best = None
    msgs = np.arange(1, 1 << 12, dtype=np.uint32)
    bits = ((msgs[:, None] >> np.arange(12)) & 1).astype(np.uint8)
    words = bits @ gen % 2
    weights = words.sum(axis=1)
    assert weights[weights > 0].min() == 7, "Golay distance check failed"
    for w in words[weights == 7]:
        m = _mask_of(w)
        if best is None or m < best:
            best = m
    sup = [q for q in range(23) if (best >> q) & 1]
    lx = PauliString.from_supports(23, x_support=sup)
    lz = PauliString.from_supports(23, z_support=sup)
    code = CssCode("golay", 23, 1, 7, h, h, lx, lz)
    _validate(code)
    return code


def _validate(code: CssCode):
    h = code.h_x
    if np.any(h @ h.T % 2):
        raise AssertionError("%s check rows are not self-orthogonal" % code.name)
    lsup = np.array([(code.logical_z.z >> q) & 1 for q in range(code.n)], np.uint8)
    if np.any(h @ lsup % 2):
        raise AssertionError("logical operator fails commutation")
    if code.logical_x.commutes_with(code.logical_z):
        raise AssertionError("logicals must anticommute")


def get_code(name: str) -> CssCode:
    if name == "steane":
        return steane_code()
    if name == "golay":
        return golay_code()
    raise KeyError("unknown code %r" % name)


# -- lookup decoding -------------------------------------------------------

def build_lookup(code: CssCode, max_weight: int) -> LookupTable:
    if max_weight > (code.d - 1) // 2:
        raise ValueError("max_weight beyond correction radius")
    r = code.n_checks
    size = 1 << r
    support = np.zeros(size, dtype=np.int64)
    overlap = np.zeros(size, dtype=np.uint8)
    valid = np.zeros(size, dtype=bool)
    h_masks = [_mask_of(row) for row in code.h_x]
    lmask = code.logical_z.z
    for w in range(max_weight + 1):
        for qs in combinations(range(code.n), w):
            err = 0
            for q in qs:
                err |= 1 << q
            syn = 0
            for j, hm in enumerate(h_masks):
                syn |= (bin(hm & err).count("1") & 1) << j
            if valid[syn]:
                raise AssertionError(
                    "duplicate syndrome %d at weight %d; table is not one-to-one"
                    % (syn, w))
            valid[syn] = True
            support[syn] = err
            overlap[syn] = bin(err & lmask).count("1") & 1
    return LookupTable(max_weight, support, overlap, valid)


@lru_cache(maxsize=None)
def lookup_for(code_name_or_code) -> LookupTable:
    code = (get_code(code_name_or_code)
            if isinstance(code_name_or_code, str) else code_name_or_code)
    return build_lookup(code, (code.d - 1) // 2)


def syndrome_of(code: CssCode, bits_mask: int, basis: str) -> int:
    h = code.h_x if basis == "X" else code.h_z
    syn = 0
    for j, row in enumerate(h):
        syn |= (bin(_mask_of(row) & bits_mask).count("1") & 1) << j
    return syn


def corrected_logical(code: CssCode, table: LookupTable, raw_bits, basis: str) -> int:
    """Decode one transversal readout to a corrected logical bit.

    ``raw_bits`` is an iterable of n bits (or an int bitmask) from measuring
    every qubit of the block in ``basis``.  The syndrome is checked against
    the same-basis stabilizer rows; the stored minimal-weight correction then
    fixes up the raw logical parity.
    """
    if isinstance(raw_bits, (int, np.integer)):
        mask = int(raw_bits)
    else:
        raw_bits = list(raw_bits)
        if len(raw_bits) != code.n:
            raise ValueError("expected %d bits" % code.n)
        mask = _mask_of(raw_bits)
    syn = syndrome_of(code, mask, basis)
    if not table.valid[syn]:
        raise DecoderFailure("syndrome %d exceeds weight-%d table" % (syn, table.max_weight))
    lmask = code.logical_mask(basis)
    raw = bin(mask & lmask).count("1") & 1
    return raw ^ int(table.logical_overlap[syn])


# -- encoders ---------------------------------------------------------------

# Steane |0>_L with 8 CNOTs; |+> preps on 1,2,3.  The permuted variant
# relabels qubits by a Hamming-code symmetry chosen (by exhaustive scan over
# the automorphism group) so that no correlated fault pair across coupled
# purification encoders slips through post-selection with a logical flip.
_STEANE_PLUS = (1, 2, 3)
_STEANE_CNOTS = ((1, 0), (3, 5), (2, 6), (1, 4), (2, 0), (3, 6), (1, 5), (6, 4))
_STEANE_PERM2 = {0: 3, 1: 5, 2: 1, 3: 0, 4: 4, 5: 6, 6: 2}

# Golay variants: compositions of the cyclic shift q -> q+a and the
# multiplier q -> 2^k q, both symmetries of the cyclic Golay code.
_GOLAY_PERMS = (
    None,
    lambda q: (2 * q + 5) % 23,
    lambda q: (4 * q + 11) % 23,
    lambda q: (8 * q + 17) % 23,
)


@lru_cache(maxsize=None)
def encoder_ops(code_name: str, variant: int, state: str = "zero"):
    """(plus_prep_qubits, cnot_list) realizing the encoder variant.

    ``state="plus"`` returns the basis-swapped twin (prep roles exchanged,
    CNOTs reversed), which prepares |+>_L for the same code.
    """
    code = get_code(code_name)
    if variant not in (1, 2, 3, 4):
        raise ValueError("variant must be 1..4")
    if code_name == "steane":
        plus, cnots = _STEANE_PLUS, _STEANE_CNOTS
        perm = _STEANE_PERM2 if variant in (2, 4) else None
        pf = (lambda q: perm[q]) if perm else None
    else:
        pivots, rows = _rref_rows(code.h_x)
        plus = tuple(pivots)
        cnots = []
        for piv, row in zip(pivots, rows):
            for q in range(code.n):
                if row[q] and q != piv:
                    cnots.append((piv, q))
        cnots = tuple(cnots)
        pf = _GOLAY_PERMS[variant - 1]
    if pf is not None:
        plus = tuple(sorted(pf(q) for q in plus))
        cnots = tuple((pf(c), pf(t)) for c, t in cnots)
    if state == "plus":
        zero = tuple(q for q in range(code.n) if q not in plus)
        return zero, tuple((t, c) for c, t in cnots)
    if state != "zero":
        raise ValueError("state must be zero or plus")
    return plus, cnots


def _rref_rows(h: np.ndarray):
    a = h.copy() % 2
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        hit = np.nonzero(a[r:, c])[0]
        if hit.size == 0:
            continue
        a[[r, r + hit[0]]] = a[[r + hit[0], r]]
        for rr in range(rows):
            if rr != r and a[rr, c]:
                a[rr] ^= a[r]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return pivots, [a[i] for i in range(len(pivots))]


def encoding_circuit(code: CssCode, variant: int, state: str = "zero") -> Circuit:
    """Noiseless encoder as a Circuit (noise placement belongs to gadgets)."""
    plus, cnots = encoder_ops(code.name, variant, state)
    circ = Circuit(code.n)
    for q in range(code.n):
        circ.append("PREP_X" if q in plus else "PREP_Z", q)
    for c, t in cnots:
        circ.append("CNOT", c, t)
    return circ


@lru_cache(maxsize=None)
def injection_encoder(code_name: str):
    """Encoder taking one physical input qubit into the logical qubit.

    Returns (input_qubit, plus_preps, cnots): every other qubit starts in
    |0>, the listed pivots get H, the input qubit's state alpha|0> + beta|1>
    comes out as the logical superposition.  The first CNOT fan spreads the
    input across a logical-Z support chosen disjoint from the pivot set;
    the rest is the X-check fan-out of the standard-form encoder.
    """
    code = get_code(code_name)
    pivots, rows = _rref_rows(code.h_x)
    pivset = set(pivots)
    # logical representative supported away from the pivots
    gen = _nullspace_gf2(code.h_x)
    k = gen.shape[0]
    msgs = np.arange(1, 1 << k, dtype=np.uint32)
    bits = ((msgs[:, None] >> np.arange(k)) & 1).astype(np.uint8)
    words = bits @ gen % 2
    weights = words.sum(axis=1)
    cand = None
    for w in sorted(set(weights[weights % 2 == 1])):
        for word in words[weights == w]:
            sup = {q for q in range(code.n) if word[q]}
            if not (sup & pivset):
                cand = sorted(sup)
                break
        if cand:
            break
    if cand is None:
        raise AssertionError("no pivot-free logical representative found")
    lq = cand[0]
    cnots = [(lq, q) for q in cand[1:]]
    for piv, row in zip(pivots, rows):
        for q in range(code.n):
            if row[q] and q != piv:
                cnots.append((piv, q))
    return lq, tuple(pivots), tuple(cnots)


def logical_s_layer(code: CssCode) -> str:
    """Which transversal layer ('s' or 's_dag') implements logical S.

    With doubly-even stabilizer codewords and a logical representative of
    weight 3 mod 4, transversal S_DAG gives diag(1, i) on the logical qubit.
    Both conditions are asserted rather than assumed.
    """
    r = code.h_x.shape[0]
    sel = ((np.arange(1, 1 << r)[:, None] >> np.arange(r)) & 1).astype(np.uint8)
    hw = (sel @ code.h_x % 2).sum(axis=1)
    if np.any(hw % 4):
        raise AssertionError("stabilizer row space is not doubly even")
    if code.logical_z.weight % 4 != 3:
        raise AssertionError("logical weight not 3 mod 4")
    return "s_dag"


def is_code_automorphism(code: CssCode, perm) -> bool:
    """True iff the qubit permutation maps the check row space onto itself."""
    h = code.h_x
    permuted = np.zeros_like(h)
    for q in range(code.n):
        permuted[:, perm(q)] = h[:, q]
    stacked = np.vstack([h, permuted])
    return _gf2_rank(stacked) == _gf2_rank(h)


def _gf2_rank(a: np.ndarray) -> int:
    a = a.copy() % 2
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        hit = np.nonzero(a[r:, c])[0]
        if hit.size == 0:
            continue
        a[[r, r + hit[0]]] = a[[r + hit[0], r]]
        for rr in range(rows):
            if rr != r and a[rr, c]:
                a[rr] ^= a[r]
        r += 1
        if r == rows:
            break
    return r


# -- table export ------------------------------------------------------------

_LUT_MAGIC = b"MBFTLUT1"


def save_lookup(table: LookupTable, path):
    buf = io.BytesIO()
    buf.write(_LUT_MAGIC)
    buf.write(struct.pack("<II", table.max_weight, table.support.size))
    buf.write(table.support.astype("<i8").tobytes())
    buf.write(table.logical_overlap.astype("<u1").tobytes())
    buf.write(np.packbits(table.valid).tobytes())
    with open(path, "wb") as f:
        f.write(buf.getvalue())


def load_lookup(path) -> LookupTable:
    with open(path, "rb") as f:
        raw = f.read()
    if raw[:8] != _LUT_MAGIC:
        raise ValueError("bad lookup table header")
    max_weight, size = struct.unpack("<II", raw[8:16])
    off = 16
    support = np.frombuffer(raw[off:off + 8 * size], dtype="<i8").copy()
    off += 8 * size
    overlap = np.frombuffer(raw[off:off + size], dtype="<u1").copy()
    off += size
    valid = np.unpackbits(np.frombuffer(raw[off:], dtype=np.uint8))[:size].astype(bool)
    return LookupTable(max_weight, support.astype(np.int64), overlap, valid)
