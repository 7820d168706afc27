"""Python-side smoke tests for the zakotfs extension module."""

import json

import numpy as np
import pytest

zakotfs = pytest.importorskip("zakotfs")

SMALL = json.dumps(
    {
        "lattice": {"M": 8, "N": 8, "delta_f_hz": 15000.0, "oversampling": 2},
        "window": {"kind": "rect"},
        "layout": {"guard_l": 2, "guard_k": 2, "pilot_shrink": 2},
        "sweep": {"axis": "snr_db", "points": [20.0]},
        "trials": 6,
        "seed": 11,
    }
)


def test_lattice_params():
    p = zakotfs.LatticeParams(8, 8, 15e3, 2)
    assert p.sample_count() == 128
    assert p.sample_rate() == pytest.approx(2 * 8 * 15e3)


def test_pswf_solution():
    sol = zakotfs.solve_pswf(0.5, 2.0, 256)
    assert 0.0 < sol.lambda0 <= 1.0
    assert sol.psi0.shape == (256,)
    # even symmetry
    assert np.allclose(sol.psi0, sol.psi0[::-1], atol=1e-8)


def test_rect_pulse_set_roundtrip():
    p = zakotfs.LatticeParams(8, 8, 15e3, 2)
    ps = zakotfs.build_pulse_set("rect", SMALL)
    P = ps.matrix
    assert P.shape == (128, 64)
    # orthonormal columns: demodulating a modulated grid is the identity
    X = np.random.default_rng(0).standard_normal((8, 8)) + 0j
    s = zakotfs.modulate(ps, X)
    y = zakotfs.correlate_receive(ps, s)
    assert np.allclose(y, X.flatten(order="F"), atol=1e-9)
    assert ps.orthogonality_defect < 1e-8


def test_iota_orthogonalizes_pswf():
    ps = zakotfs.build_pulse_set("pswf", SMALL)
    assert ps.orthogonality_defect > 1e-3
    ps2 = zakotfs.build_pulse_set("iota-pswf", SMALL)
    assert ps2.orthogonality_defect < 1e-8


def test_effective_channel_vs_twisted_convolution():
    p = zakotfs.LatticeParams(8, 8, 15e3, 2)
    ps = zakotfs.build_pulse_set("rect", SMALL)
    paths = zakotfs.draw_eva_channel(seed=5, nu_max_hz=400.0)
    H, fund = zakotfs.effective_channel(ps, paths)
    assert H.shape == (64, 64)
    # quasi-periodic assembly of the extracted grid acts like H near the probe
    X = np.zeros((8, 8), complex)
    X[4, 4] = 1.0
    Y1 = zakotfs.twisted_convolution(X, fund, p)
    Y2 = (zakotfs.build_H_from_heff(fund, p) @ X.flatten(order="F")).reshape((8, 8), order="F")
    assert np.allclose(Y1, Y2, atol=1e-10)


def test_channel_application_linearity():
    p = zakotfs.LatticeParams(8, 8, 15e3, 2)
    paths = zakotfs.draw_eva_channel(seed=9, nu_max_hz=300.0)
    rng = np.random.default_rng(1)
    a = rng.standard_normal(128) + 1j * rng.standard_normal(128)
    b = rng.standard_normal(128) + 1j * rng.standard_normal(128)
    lhs = zakotfs.apply_channel(2 * a + 1j * b, paths, p)
    rhs = 2 * zakotfs.apply_channel(a, paths, p) + 1j * zakotfs.apply_channel(b, paths, p)
    assert np.allclose(lhs, rhs, atol=1e-12)


def test_run_sweep_deterministic():
    r1 = zakotfs.run_sweep(SMALL)
    r2 = zakotfs.run_sweep(SMALL)
    assert r1["points"] == r2["points"]
    assert r1["points"][0]["trials"] == 6
    assert 0.0 <= r1["points"][0]["ber"] <= 1.0


def test_bad_config_rejected():
    with pytest.raises(ValueError):
        zakotfs.run_sweep(json.dumps({"bogus_key": 1}))
