"""Resource estimation golden numbers and monotonicity."""

import math

import pytest

from mbftqc import estimator as ES


def test_eta_block_arithmetic():
    # five blocks per data qubit; the Golay path adds two test ancillas
    assert ES.ETA_STEANE == 7 * 5 == 35
    assert ES.ETA_GOLAY == 23 * 5 + 2 == 117


def test_qv_steane_reference_point():
    est = ES.qv_steane(ES.REFERENCE_RATES_P1E4_STEANE)
    assert est.m == 64
    assert abs(est.m_raw - 64.2) < 0.15
    assert est.n_physical == 2240


def test_qv_steane_scaling():
    r = ES.REFERENCE_RATES_P1E4_STEANE
    est4 = ES.qv_steane(ES.GateErrorRates(4 * r.p_h, 4 * r.p_cz,
                                          4 * r.p_nonclifford))
    assert est4.m == 32


def test_qv_steane_table1_rates():
    est = ES.qv_steane(ES.GateErrorRates(5.88e-4, 2.59e-3, 8.85e-4))
    want = int(math.sqrt(2 / (15 * 5.88e-4 + 3 * 2.59e-3 + 15 * 8.85e-4)))
    assert est.m == want


def test_synthesis_fixed_point():
    p_t = 4.76e-10
    delta = ES.synthesis_accuracy(p_t)
    assert abs(delta - 3.53e-8) / 3.53e-8 < 0.01
    assert abs(delta - 3 * p_t * math.log2(1 / delta)) / delta < 1e-6
    with pytest.raises(ValueError):
        ES.synthesis_accuracy(0.0)


def test_qv_golay_reference_point():
    est = ES.qv_golay(4.76e-10)
    assert est.n_t_per_rotation == 74
    assert abs(est.m - 2844) <= 1
    assert est.n_physical == est.m * 117
    assert abs(est.n_physical - 332748) <= 117


def test_qv_golay_monotone():
    last = None
    for p_t in (1e-8, 1e-9, 1e-10, 1e-11):
        m = ES.qv_golay(p_t).m
        if last is not None:
            assert m > last
        last = m


def test_workloads():
    t = ES.estimate_tables()
    femoco = t["workloads"]["femoco54"]
    rsa = t["workloads"]["rsa2048"]
    assert femoco.n_physical == 133029
    assert femoco.feasible
    assert rsa.n_physical == 175383
    assert rsa.marginal and not rsa.feasible
    assert 1.0 < rsa.total_error < 1.5
    zero_t = ES.workload(10, 1e-9, 4.76e-10)   # vanishing T budget
    assert zero_t.feasible


def test_workload_guards():
    with pytest.raises(ValueError):
        ES.workload(0, 1e9, 1e-10)
    with pytest.raises(ValueError):
        ES.workload(10, 1e9, 2.0)


def test_rz_equivalent_t_count():
    out = ES.rz_equivalent_t_count(2.05e-5)
    assert out["t_per_rotation"] == 47
    assert abs(out["rotations"] - 5.0e4) / 5.0e4 < 0.05
    assert abs(out["t_equivalents"] - 2.4e6) / 2.4e6 < 0.10
    assert ES.rz_equivalent_t_count(0.5)["t_per_rotation"] == 3


def test_rates_validation():
    with pytest.raises(ValueError):
        ES.GateErrorRates(0.0, 1e-3, 1e-3)


def test_width_100_footprint():
    assert 100 * ES.ETA_GOLAY == 11700
