import numpy as np
import pytest

from ddqpc.entanglement import entropy_of_formation
from ddqpc.errors import InvalidState
from ddqpc.experiments import (
    ScenarioConfig,
    collapse_average,
    default_config,
    find_optimal_coupling,
    log_grid,
    run_measure_compare,
    run_single_dd,
    run_singlet_pair,
    run_tomography_dump,
)
from ddqpc.linalg import I2, KET_L, ket_to_dm, singlet

from conftest import random_density


def s_at(result, tau):
    i = int(np.argmin(np.abs(result.columns["tau"] - tau)))
    assert abs(result.columns["tau"][i] - tau) < 1e-9
    return result.columns["S"][i]


def test_single_dd_localized_start():
    res = run_single_dd(default_config("single_dd", alpha=5.0, tau_max=3.0))
    assert list(res.columns) == ["tau", "S", "R"]
    assert res.columns["S"][0] == 0
    assert abs(res.summary["R_initial"]) < 5e-2
    assert res.summary["tau_E_0.90"] < res.summary["tau_E_0.95"] < res.summary["tau_E_0.99"]


def test_single_dd_superposition_grows_with_coupling():
    lo = run_single_dd(default_config("single_dd", alpha=5.0, theta_deg=90.0, tau_max=1.0))
    hi = run_single_dd(default_config("single_dd", alpha=20.0, theta_deg=90.0, tau_max=1.0))
    assert s_at(hi, 0.5) > s_at(lo, 0.5)


def test_single_dd_strong_coupling_slows_localized_start():
    lo = run_single_dd(default_config("single_dd", alpha=10.0, tau_max=2.0))
    hi = run_single_dd(default_config("single_dd", alpha=40.0, tau_max=2.0))
    assert s_at(hi, 2.0) < s_at(lo, 2.0)


def test_optimal_coupling_small_grid():
    cfg = default_config("optimal_coupling", alpha_grid=[0.5, 2.0, 5.0, 10.0, 50.0], tau_max=20.0)
    res = find_optimal_coupling(cfg)
    assert list(res.columns) == ["alpha", "tau_E"]
    assert res.summary["alpha_opt"] == 5.0
    assert res.summary["interior_minimum"]


def test_optimal_coupling_records_unreached():
    cfg = default_config("optimal_coupling", alpha_grid=[4.0, 5.0, 200.0], tau_max=3.0)
    res = find_optimal_coupling(cfg)
    assert np.isnan(res.columns["tau_E"][-1])
    assert res.summary["unreached"] == [200.0]
    assert res.summary["alpha_opt"] == 5.0


def test_optimal_coupling_strong_side_trend():
    cfg = default_config("optimal_coupling", alpha_grid=[20.0, 40.0, 41.0], tau_max=20.0)
    tau_e = find_optimal_coupling(cfg).columns["tau_E"]
    assert tau_e[1] > tau_e[0]


def test_config_validation():
    with pytest.raises(ValueError):
        ScenarioConfig("nope")
    with pytest.raises(ValueError):
        default_config("optimal_coupling", alpha_grid=[1.0, 0.5, 2.0])
    with pytest.raises(ValueError):
        default_config("single_dd", dt=0.5)
    assert default_config("singlet_pair").alpha == 20.0
    assert default_config("measure_compare").tau_max == 200.0


def test_log_grid():
    grid = log_grid(0.5, 50, 25)
    assert len(grid) == 25 and grid[0] == 0.5 and grid[-1] == 50 and 5.0 in grid


def test_singlet_pair_examples():
    res = run_singlet_pair(default_config("singlet_pair", tau_max=5.0))
    assert list(res.columns) == ["tau", "EoF", "S_pair", "C"]
    assert res.columns["EoF"][0] == pytest.approx(1, abs=1e-9)
    assert res.columns["S_pair"][0] < 1e-9
    assert res.summary["tau_D"] < res.summary["tau_E2"]
    assert np.all(res.columns["EoF"] <= res.columns["EoF"][0] + 1e-12)
    assert res.summary["cross_path_max_dev"] < 1e-6


def test_singlet_pair_thorough_mode():
    res = run_singlet_pair(default_config("singlet_pair", tau_max=1.0, thorough=True))
    assert res.summary["cross_path_max_dev"] < 1e-6


def test_collapse_average_examples():
    np.testing.assert_allclose(collapse_average(singlet()), np.diag([0, 0.5, 0.5, 0]), atol=1e-15)
    prod = np.kron(ket_to_dm(KET_L), np.array([[0.6, 0.2j], [-0.2j, 0.4]]))
    np.testing.assert_allclose(collapse_average(prod), prod, atol=1e-15)
    diag = np.kron(np.diag([0.3, 0.7]), np.array([[0.5, 0.1], [0.1, 0.5]]))
    np.testing.assert_allclose(collapse_average(diag), diag, atol=1e-15)
    with pytest.raises(InvalidState):
        collapse_average(np.zeros((4, 4)))


def test_collapse_average_properties(rng):
    for _ in range(20):
        rho = random_density(rng, 4)
        once = collapse_average(rho)
        np.testing.assert_allclose(collapse_average(once), once, atol=1e-12)
        assert abs(np.trace(once) - 1) < 1e-14
    assert entropy_of_formation(collapse_average(singlet())) == 0


def test_measure_compare_short_horizon():
    res = run_measure_compare(default_config("measure_compare", tau_max=5.0))
    assert list(res.columns) == ["tau", "D", "EoF_schrodinger", "EoF_measured"]
    assert res.summary["D_0"] == pytest.approx(1 / np.sqrt(2), abs=1e-9)
    assert res.summary["D_max"] == res.summary["D_0"]
    assert np.all(res.columns["EoF_measured"] < 1e-12)


def test_tomography_dump():
    res = run_tomography_dump(default_config("tomography_dump", tau_max=2.0, stride=200))
    assert len(res.columns) == 1 + 32 + 3
    first = {k: v[0] for k, v in res.columns.items()}
    for key in ("J00_re", "J03_re", "J30_re", "J33_re"):
        assert first[key] == pytest.approx(1, abs=1e-12)
    assert abs(first["J11_re"]) < 1e-12
    assert res.summary["worst_min_eigenvalue"] >= -1e-8
    assert res.summary["worst_tp_deviation"] <= 1e-6


def test_runs_are_deterministic():
    cfg = default_config("singlet_pair", tau_max=1.0)
    a, b = run_singlet_pair(cfg), run_singlet_pair(cfg)
    for key in a.columns:
        assert np.array_equal(a.columns[key], b.columns[key])
    assert a.summary == b.summary
