import math

import numpy as np
import pytest

import ppbell


def test_closed_forms():
    assert ppbell.s_chd_exact(1, math.pi / 8) == pytest.approx((1 + math.sqrt(2)) / 2, abs=1e-12)
    assert ppbell.g_exact(2, 0.3) == pytest.approx(math.cos(0.3) ** 4, abs=1e-14)
    assert ppbell.fock_s_ch(0.1) == pytest.approx((math.sqrt(2) + 1) / 2, abs=1e-10)
    assert ppbell.fock_s_chd(0.1, 1, math.pi / 8) == pytest.approx(ppbell.pdc_s_chd_exact(0.1, math.pi / 8), abs=1e-9)


def test_static_samples_and_estimator():
    pts = ppbell.sample_static(1, 1 << 15, seed=3)
    assert pts.shape == (1 << 15, 2, 4)
    assert pts.dtype == np.complex128
    again = ppbell.sample_static(1, 1 << 15, seed=3)
    assert np.array_equal(pts, again)
    s = ppbell.s_chd(pts, 1, math.pi / 8)
    assert s["statistic"] == "S_CHD"
    exact = ppbell.s_chd_exact(1, math.pi / 8)
    assert abs(s["value"] - exact) < 4 * s["stderr"]


def test_bad_shape_rejected():
    with pytest.raises(ValueError):
        ppbell.s_chd(np.zeros((10, 4), dtype=complex), 1, 0.1)


def test_simulate_number_moment():
    ens = ppbell.simulate(1 << 13, [0.1], seed=5)
    pts = ens["points"][0]
    assert pts.shape == (1 << 13, 2, 4)
    n = (pts[:, 1, 0] * pts[:, 0, 0]).real
    se = n.std() / math.sqrt(len(n))
    assert abs(n.mean() - ppbell.pdc_number_exact(0.1)) < 4 * se


def test_run_static_chd_result():
    r = ppbell.run_static_chd(pairs=1, phis=[math.pi / 8], n_samples=1 << 14, seed=2)
    assert r["header"][:2] == ["phi", "S_CHD"]
    assert len(r["rows"]) == 1
    assert r["csv"].startswith("# manifest:")
    assert r["exit_code"] in (0, 4)


def test_config_error():
    with pytest.raises(ppbell.ConfigError):
        ppbell.run_dynamic("chd", postselect=True, n_traj=1 << 12)


def test_waveguide_runs():
    r = ppbell.run_waveguide(n_traj=1 << 12, z_end=0.02, kappa=0.0, gamma=1.0, seed_amplitude=1.0)
    assert any("loss check: PASS" in n for n in r["notes"])
