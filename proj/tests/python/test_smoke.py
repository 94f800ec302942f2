"""Smoke tests for the python surface of the C++ core."""

import math

import numpy as np
import pytest

import fredkinsim as fs


def test_state_constructors():
    v = fs.fock_state(2, 6)
    assert v.norm() == pytest.approx(1.0)
    assert np.argmax(np.abs(v.amps)) == 2

    alpha = fs.coherent_state(1.1, 12)
    assert abs(abs(alpha.amps[0]) - math.exp(-0.605)) < 1e-6

    cat = fs.cat_state(1.1, "odd", 12)
    assert cat.amps[0] == 0.0

    with pytest.raises(fs.FsimError):
        fs.coherent_state(3.0, 4)


def test_derived_parameters():
    p = fs.PhysicalParams(g_over_2pi=70e6, D=16.0)
    d = fs.derive(p)
    assert d.lambda_ / (2 * math.pi) == pytest.approx(4.375e6)
    assert d.t_swap == pytest.approx(57.142857e-9)
    assert d.t_pulse == pytest.approx(1.25e-9)


def test_gate_unitaries_and_parity_identity():
    p = fs.PhysicalParams(D=16.0, d1=4, d2=4)
    U = fs.effective_gate_unitary(p).matrix
    expect = fs.controlled_parity(p_layout(p)).matrix @ fs.ideal_fredkin(p_layout(p)).matrix
    # compare on the faithful subspace n1 + n2 <= d - 1
    d = 4
    for q in (0, 2):
        for n in range(d):
            for m in range(d):
                if n + m > d - 1:
                    continue
                col = (q * d + n) * d + m
                for q2 in (0, 2):
                    for n2 in range(d):
                        for m2 in range(d):
                            if n2 + m2 > d - 1:
                                continue
                            row = (q2 * d + n2) * d + m2
                            assert abs(U[row, col] - expect[row, col]) < 1e-10


def p_layout(p):
    return fs.SpaceLayout.qutrit_with_modes(p.d1, p.d2)


def test_closed_protocol_and_measurement():
    p = fs.PhysicalParams(D=16.0, d1=6, d2=6)
    res = fs.run_protocol(p, scenario="noon", noon_n=5, mode="effective", lossy=False)
    assert res.fidelity == pytest.approx(1.0, abs=1e-8)

    m = fs.measure_control(res.final_rho)
    assert m.p_g + m.p_e + m.leak_a == pytest.approx(1.0, abs=1e-8)
    noon_minus = fs.target_entangled_state("noon", branch="minus", N=5, d1=6, d2=6)
    noon_plus = fs.target_entangled_state("noon", branch="plus", N=5, d1=6, d2=6)
    f_minus = fs.state_fidelity(noon_minus, m.memory_g)
    f_plus = fs.state_fidelity(noon_plus, m.memory_g)
    # N = 5 parity swaps the branch labels relative to the algebraic gate
    assert max(f_minus, f_plus) > 1 - 1e-8


def test_swap_test_routes():
    a = fs.coherent_state(1.1, 12)
    r = fs.swap_test(a, a, gate="ideal")
    assert r["inferred_F2"] == pytest.approx(1.0, abs=1e-9)

    p = fs.PhysicalParams(D=16.0, d1=12, d2=12, Omega_over_2pi=100e6)
    r_eff = fs.swap_test(a, a, gate="effective", params=p)
    assert r_eff["inferred_F2"] == pytest.approx(math.exp(-4.84), abs=1e-3)


def test_concurrence():
    bal = 1 / math.sqrt(2)
    assert fs.concurrence_from_overlap(bal, bal, 0.5, "plus") == pytest.approx(0.6, abs=1e-9)
    assert fs.concurrence_from_overlap(bal, bal, 0.5, "minus") == pytest.approx(1.0, abs=1e-6)
    closed = fs.concurrence_closed_form(bal, bal, 0.0, "plus")
    assert closed["value"] == pytest.approx(math.sqrt(1.75), abs=1e-9)

    bell = fs.target_entangled_state("noon", branch="plus", N=1, d1=2, d2=2)
    assert fs.concurrence(bell) == pytest.approx(1.0, abs=1e-9)


def test_lossy_protocol_smoke():
    # tiny lossy run: N = 1 NOON at small cutoff stays cheap
    p = fs.PhysicalParams(D=16.0, d1=3, d2=3, kappa1=2e5, kappa2=2e5, gamma_ag=2e5,
                          gamma_ea=2e5, gamma_eg=2e5, gamma_phi_a=5e5, gamma_phi_e=5e5)
    res = fs.run_protocol(p, scenario="noon", noon_n=1, mode="full", lossy=True)
    assert 0.9 < res.fidelity <= 1.0
    assert res.trace_error < 1e-8
    assert res.final_rho.min_eigenvalue() > -1e-8


def test_nv_validation():
    dev = fs.validate_low_excitation(4, mu_over_2pi=7e6, excitations=1)
    assert dev < 1e-6
