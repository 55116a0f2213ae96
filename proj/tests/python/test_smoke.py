import numpy as np
import pytest

import muskat


def test_flat_dn_is_abs_nabla():
    n = 64
    g = muskat.single_mode(n, 3, 1.0)
    out = muskat.dn_image(np.zeros(n), g)
    assert np.allclose(out["dn"], 3.0 * g, atol=1e-12)
    assert np.max(np.abs(out["remainder"])) < 1e-12


def test_dn_small_slope_softens_low_mode():
    n = 64
    f = muskat.single_mode(n, 2, 0.01)
    g = muskat.single_mode(n, 1, 1.0)
    out = muskat.dn_image(f, g)
    # G(eps cos 2x) cos x = (1 - eps) cos x + O(eps^2)
    ref = 0.99 * g
    assert np.max(np.abs(out["dn"] - ref)) < 5e-4


def test_backends_agree():
    n = 64
    f = muskat.single_mode(n, 1, 0.05)
    g = muskat.single_mode(n, 2, 1.0)
    a = muskat.dn_image(f, g, backend="fixed_point")["dn"]
    b = muskat.dn_image(f, g, backend="elliptic")["dn"]
    assert np.linalg.norm(a - b) / np.linalg.norm(a) < 5e-3


def test_curvature_linear_part():
    n = 64
    f = muskat.single_mode(n, 3, 0.1)
    parts = muskat.curvature(f)
    assert np.allclose(parts["linear"], 9.0 * f, atol=1e-12)
    assert np.max(np.abs(parts["nonlinear"])) < np.max(np.abs(parts["linear"]))


def test_norms_closed_form():
    n = 64
    f = muskat.single_mode(n, 3, 2.0)
    vals = muskat.norms(f)
    assert vals["l2"] == pytest.approx(2.0 * np.sqrt(np.pi), rel=1e-12)
    assert vals["h_half"] == pytest.approx(2.0 * np.sqrt(3.0 * np.pi), rel=1e-12)
    assert vals["mean"] == pytest.approx(0.0, abs=1e-14)


def test_linear_rate_defaults():
    assert muskat.linear_rate(1) == pytest.approx(2.0)
    assert muskat.linear_rate(2) == pytest.approx(10.0)


def test_simulate_decays_and_reports():
    n = 32
    f0 = muskat.single_mode(n, 1, 0.01)
    res = muskat.simulate(f0, 0.02, 1e-3, cadence=5, levels=80, z_max=25.0, ratio=1.1)
    assert res["completed"]
    assert res["t_reached"] == pytest.approx(0.02)
    assert res["states"].shape == (5, n)
    l2 = res["diagnostics"]["l2"]
    assert np.all(np.diff(l2) <= 1e-12)
    assert np.all(np.abs(res["diagnostics"]["mean"]) < 1e-10)


def test_simulate_linear_only_rate():
    n = 32
    f0 = muskat.single_mode(n, 1, 0.01)
    res = muskat.simulate(f0, 0.5, 1e-2, nonlinearity="linear_only", cadence=10,
                          levels=80, z_max=25.0, ratio=1.1)
    rate, r2 = muskat.fit_decay_rate(res["times"], res["diagnostics"]["l2"], 0.0, 0.5)
    assert rate == pytest.approx(2.0, rel=1e-6)
    assert r2 > 0.999999


def test_validation_maps_to_value_error():
    with pytest.raises(ValueError):
        muskat.dn_image(np.zeros(48), np.zeros(48))  # 48 is not a power of two
    with pytest.raises(ValueError):
        muskat.simulate(np.zeros(32), 0.02, 1e-3, scheme="leapfrog")


def test_steep_interface_raises_solver_error():
    n = 32
    f = muskat.single_mode(n, 1, 1.5)
    with pytest.raises(RuntimeError):
        muskat.dn_image(f, f)


def test_lp_blocks_resum():
    rng = np.random.default_rng(5)
    f = rng.standard_normal(128)
    f -= f.mean()
    total = sum(muskat.lp_project(f, j) for j in range(-1, 9))
    assert np.allclose(total, f, atol=1e-11)
