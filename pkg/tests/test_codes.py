"""Code definitions, lookup decoding, encoders and their variants."""

import itertools

import numpy as np
import pytest

from mbftqc import codes, tableau
from mbftqc.codes import (DecoderFailure, build_lookup, corrected_logical,
                          encoding_circuit, golay_code, lookup_for,
                          steane_code)
from mbftqc.pauli import PauliString


def test_parameters():
    sc, gc = steane_code(), golay_code()
    assert (sc.n, sc.k, sc.d) == (7, 1, 3)
    assert (gc.n, gc.k, gc.d) == (23, 1, 7)
    assert sc.h_x.shape == (3, 7)
    assert gc.h_x.shape == (11, 23)


def test_self_duality_and_logicals():
    for code in (steane_code(), golay_code()):
        assert np.array_equal(code.h_x, code.h_z)
        assert not code.logical_x.commutes_with(code.logical_z)
        assert code.logical_x.weight >= code.d
        assert code.logical_x.weight == code.d  # minimum-weight representative
        for row in code.h_x:
            sup = [q for q in range(code.n) if row[q]]
            xrow = PauliString.from_supports(code.n, x_support=sup)
            zrow = PauliString.from_supports(code.n, z_support=sup)
            assert xrow.commutes_with(zrow)
            assert xrow.commutes_with(code.logical_z)
            assert zrow.commutes_with(code.logical_x)


def test_lookup_entry_counts():
    assert lookup_for("steane").n_entries == 8
    assert lookup_for("golay").n_entries == 2048
    # perfect-code property: binomial mass up to the radius fills the space
    assert sum(len(list(itertools.combinations(range(23), k)))
               for k in range(4)) == 2048


def test_lookup_weight_cap():
    with pytest.raises(ValueError):
        build_lookup(steane_code(), 2)


def test_steane_single_error_syndromes_are_columns():
    code = steane_code()
    table = lookup_for("steane")
    seen = set()
    for q in range(7):
        syn = codes.syndrome_of(code, 1 << q, "Z")
        col = sum(int(code.h_z[j][q]) << j for j in range(3))
        assert syn == col
        assert table.support[syn] == 1 << q
        seen.add(syn)
    assert len(seen) == 7 and 0 not in seen


def test_decoder_exactness_steane_exhaustive():
    code = steane_code()
    table = lookup_for("steane")
    for basis in "XZ":
        for weight in (0, 1):
            for qs in itertools.combinations(range(7), weight):
                err = 0
                for q in qs:
                    err |= 1 << q
                assert corrected_logical(code, table, err, basis) == 0


def test_decoder_degeneracy_weight2_equals_logical_times_weight1():
    """A weight-2 flip chosen as logical * weight-1 decodes to a flip."""
    code = steane_code()
    table = lookup_for("steane")
    lmask = code.logical_z.z
    for q in range(7):
        pattern = lmask ^ (1 << q)
        got = corrected_logical(code, table, pattern, "Z")
        assert got == 1


def test_decoder_exactness_golay():
    code = golay_code()
    table = lookup_for("golay")
    # full weight <= 3 sweep
    for weight in range(4):
        for qs in itertools.combinations(range(23), weight):
            err = 0
            for q in qs:
                err |= 1 << q
            assert corrected_logical(code, table, err, "X") == 0
    # random heavier patterns: corrected value equals noiseless value
    # whenever the true error is within the correction radius of a codeword
    rng = np.random.default_rng(17)
    lmask = code.logical_z.z
    for _ in range(100_000):
        qs = rng.choice(23, size=3, replace=False)
        err = 0
        for q in qs:
            err |= 1 << int(q)
        raw = err ^ (lmask if rng.integers(2) else 0)
        want = 1 if raw != err else 0
        assert corrected_logical(code, table, raw, "Z") == want


def test_lookup_same_table_both_bases():
    for name in ("steane", "golay"):
        code = codes.get_code(name)
        w = (code.d - 1) // 2
        a = build_lookup(code, w)
        flipped = codes.CssCode(code.name, code.n, code.k, code.d,
                                code.h_z, code.h_x,
                                code.logical_x, code.logical_z)
        b = build_lookup(flipped, w)
        assert np.array_equal(a.support, b.support)
        assert np.array_equal(a.logical_overlap, b.logical_overlap)


def test_lookup_export_roundtrip(tmp_path):
    table = lookup_for("golay")
    path = tmp_path / "golay.lut"
    codes.save_lookup(table, path)
    back = codes.load_lookup(path)
    assert back.max_weight == table.max_weight
    assert np.array_equal(back.support, table.support)
    assert np.array_equal(back.logical_overlap, table.logical_overlap)
    assert np.array_equal(back.valid, table.valid)
    with pytest.raises(ValueError):
        codes.load_lookup(__file__)


def test_encoder_variants_all_codes():
    for name in ("steane", "golay"):
        code = codes.get_code(name)
        texts = set()
        for variant in (1, 2, 3, 4):
            circ = encoding_circuit(code, variant)
            t = tableau.Tableau(code.n)
            tableau.run(circ, t)
            assert t.measure_observable(code.logical_z) == (1, True)
            for row in code.h_x:
                sup = [q for q in range(code.n) if row[q]]
                obs = PauliString.from_supports(code.n, x_support=sup)
                assert t.measure_observable(obs) == (1, True)
            texts.add(circ.to_text())
        # Steane pairs (1,3) and (2,4) share wiring; Golay variants all differ
        assert len(texts) == (2 if name == "steane" else 4)


def test_steane_variant_is_automorphism_relabel():
    c1 = codes.encoder_ops("steane", 1)
    c2 = codes.encoder_ops("steane", 2)
    perm = codes._STEANE_PERM2
    assert sorted(perm[q] for q in c1[0]) == sorted(c2[0])
    assert tuple((perm[c], perm[t]) for c, t in c1[1]) == c2[1]
    assert codes.is_code_automorphism(steane_code(), lambda q: perm[q])


def test_golay_variant_permutations_are_automorphisms():
    code = golay_code()
    for pf in codes._GOLAY_PERMS[1:]:
        assert codes.is_code_automorphism(code, pf)


def test_steane_encoder_cnot_count():
    assert len(codes.encoder_ops("steane", 1)[1]) == 8


def test_plus_encoder_dual():
    for name in ("steane", "golay"):
        code = codes.get_code(name)
        circ = encoding_circuit(code, 1, state="plus")
        t = tableau.Tableau(code.n)
        tableau.run(circ, t)
        assert t.measure_observable(code.logical_x) == (1, True)
        ev, ok = t.measure_observable(code.logical_z)
        assert not ok


def test_golay_distance_seven():
    code = golay_code()
    gen = codes._nullspace_gf2(code.h_x)
    msgs = np.arange(1, 1 << 12, dtype=np.uint32)
    bits = ((msgs[:, None] >> np.arange(12)) & 1).astype(np.uint8)
    words = bits @ gen % 2
    assert words.sum(axis=1).min() == 7


def test_decoder_failure_signal():
    # build a truncated table to exercise the failure path
    code = golay_code()
    table = build_lookup(code, 1)
    err = (1 << 0) | (1 << 5) | (1 << 11)
    with pytest.raises(DecoderFailure):
        corrected_logical(code, table, err, "Z")


def test_check_text():
    text = steane_code().check_text()
    assert "steane" in text and text.count("\n") >= 4
