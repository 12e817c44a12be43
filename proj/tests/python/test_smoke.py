"""Smoke tests for the python bindings."""

import numpy as np
import pytest

import nlfv


def test_builtin_models():
    models = nlfv.builtin_models()
    assert set(models) == {"kk1d", "kk2d", "linadv"}


def test_preset_text():
    text = nlfv.preset_text("paper-1d")
    assert "kk1d" in text
    assert "n_cells: 640" in text
    with pytest.raises(nlfv.Error):
        nlfv.preset_text("paper-3d")


def test_run1d_linear_advection_conserves_mass():
    result = nlfv.run1d("linadv", 0.0, 3.2, 128, 0.25)
    assert result["u"].shape == (1, 128)
    assert result["t"] == 0.25
    assert result["monitors_passed"]
    assert result["min_value"] >= -1e-14
    mass0 = 0.5  # raised cosine of height 1 on an interval of length 1
    mass = result["u"].sum() * result["dx"]
    assert abs(mass - mass0) < 1e-12


def test_run1d_coupled_system_with_snapshots():
    result = nlfv.run1d(
        "kk1d", 0.0, 4.0, 160, 0.1, snapshots=[0.0, 0.05, 0.1]
    )
    assert result["u"].shape == (2, 160)
    assert result["sigma"].shape == (2, 160)
    assert result["lambda"] == 1.0 / 7.0
    assert len(result["snapshots"]) == 3
    assert result["snapshots"][0]["t"] == 0.0
    assert result["snapshots"][2]["t"] == 0.1
    assert result["monitors_passed"], result["monitor_findings"]
    assert abs(result["mass_drift"]) <= 1e-11

    again = nlfv.run1d(
        "kk1d", 0.0, 4.0, 160, 0.1, snapshots=[0.0, 0.05, 0.1]
    )
    assert np.array_equal(result["u"], again["u"])


def test_run1d_rejects_bad_config():
    with pytest.raises(nlfv.Error):
        nlfv.run1d("kk1d", 0.0, 4.0, 160, 0.1, theta=0.7)
    with pytest.raises(nlfv.Error):
        nlfv.run1d("no-such-model", 0.0, 4.0, 160, 0.1)
    with pytest.raises(nlfv.Error):
        nlfv.run1d("kk1d", 0.0, 4.0, 160, 0.1, quadrature="gauss")


def test_run2d_shapes_and_monitors():
    result = nlfv.run2d(
        "kk2d", -1.1, 1.1, -1.1, 1.1, 44, 44, 0.02, quadrature="left"
    )
    assert result["u"].shape == (2, 44, 44)
    assert result["x"].shape == (44,)
    assert result["t"] == 0.02
    assert result["lambda"] == 1.0 / 14.0
    assert result["monitors_passed"], result["monitor_findings"]
    assert result["min_value"] >= -1e-14


def test_convergence_study_meets_floor():
    table = nlfv.convergence_study(
        "linadv", 0.0, 3.2, 64, 0.5, levels=3
    )
    assert table["error"].shape == (2,)
    assert table["error"][0] > table["error"][1] > 0.0
    assert np.isnan(table["rate"][-1])
    assert table["rate_floor"] == 0.5
    assert table["meets_floor"]


def test_entropy_scan_clean_and_defective():
    clean = nlfv.entropy_scan("kk1d", 0.0, 4.0, 160, 0.05, alphas=11)
    assert clean["alpha"].shape == (11,)
    assert clean["worst"] <= 1e-12

    dirty = nlfv.entropy_scan(
        "kk1d", 0.0, 4.0, 160, 0.02, alphas=5, debug_antidiffusion=True
    )
    assert dirty["worst"] > 1e-12


def test_sigma_eval_staircase():
    x = np.linspace(0.0, 4.0, 801)
    sigma = nlfv.sigma_eval("kk1d", 0, x)
    assert sigma.shape == x.shape
    # the lowest plateau is 1 - 0.8, one ulp below 0.2 in doubles
    assert sigma.min() >= 0.2 - 1e-15
    assert sigma.max() <= 1.0
    assert len(np.unique(sigma)) > 1  # genuinely discontinuous
