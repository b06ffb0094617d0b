import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st

from ddqpc.dynamics import (
    DetectorParams,
    GeneratorParams,
    InitialStateParams,
    TimeGrid,
    bloch_derivative,
    evolve_batch,
    evolve_exact_oracle,
    evolve_pair_one_sided,
    evolve_single,
    expm_taylor,
    initial_state,
    lindblad_derivative,
    superoperator,
    unvec,
    vec,
)
from ddqpc.entanglement import concurrence, entanglement_entropy_series, von_neumann_entropy
from ddqpc.errors import NumericalFailure
from ddqpc.linalg import I2, I4, SIGMA_X, singlet

from conftest import random_density


def test_detector_rate():
    d = DetectorParams(t1=0.3, vd=2.0, mu_l=1.0)
    assert d.gamma_d == 0.3 * 2.0 / (2 * math.pi)
    assert d.mu_r == -1.0
    g = d.generator(omega0=0.5)
    assert g.alpha == pytest.approx(d.gamma_d / 0.5)


def test_normalized_params():
    g = GeneratorParams.normalized(alpha=5, delta=0.5, omega0=2.0)
    assert (g.gamma_d, g.epsilon, g.alpha, g.delta) == (10.0, 1.0, 5.0, 0.5)


def test_time_grid_validation():
    with pytest.raises(ValueError):
        TimeGrid(1.0, dt=0.5)
    with pytest.raises(ValueError):
        TimeGrid(-1.0)
    with pytest.raises(ValueError):
        TimeGrid(1e7, dt=1e-3)
    grid = TimeGrid(math.pi / 8)
    assert grid.n_steps * grid.step == pytest.approx(math.pi / 8, abs=1e-15)
    assert grid.step <= 1e-3


@pytest.mark.parametrize(
    "theta, phi, expected",
    [
        (0.0, 0.0, [[1, 0], [0, 0]]),
        (math.pi / 2, 0.0, [[0.5, 0.5], [0.5, 0.5]]),
        (math.pi / 2, math.pi / 2, [[0.5, -0.5j], [0.5j, 0.5]]),
    ],
)
def test_initial_state(theta, phi, expected):
    s = initial_state(InitialStateParams(theta, phi))
    np.testing.assert_allclose(s, expected, atol=1e-15)
    assert abs(np.linalg.det(s)) < 1e-12


def test_derivative_examples():
    g = GeneratorParams(omega0=0.7, epsilon=0.3, gamma_d=2.0)
    d = lindblad_derivative(np.diag([1, 0]), g)
    assert d[0, 0] == 0
    assert d[0, 1] == pytest.approx(1j * 0.7)

    g0 = GeneratorParams(omega0=1.0)
    np.testing.assert_allclose(lindblad_derivative(0.5 * (I2 + SIGMA_X), g0), 0, atol=1e-16)

    diag = GeneratorParams(omega0=0.0, epsilon=0.4, gamma_d=1.5)
    d = lindblad_derivative(0.5 * (I2 + SIGMA_X), diag)
    assert d[0, 1] == pytest.approx((0.4j - 0.75) / 2)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_bloch_and_lindblad_forms_agree(seed):
    rng = np.random.default_rng(seed)
    sigma = random_density(rng, 2)
    g = GeneratorParams(rng.uniform(0, 3), rng.normal(), rng.uniform(0, 50))
    np.testing.assert_allclose(bloch_derivative(sigma, g), lindblad_derivative(sigma, g), atol=1e-14, rtol=0)


def test_superoperator_matches_derivative(rng):
    g = GeneratorParams(1.0, 0.4, 3.0)
    for dim in (2, 4):
        rho = random_density(rng, dim)
        lhs = unvec(superoperator(g, dim) @ vec(rho))
        np.testing.assert_allclose(lhs, lindblad_derivative(rho, g), atol=1e-14)


def test_expm_taylor_against_scipy(rng):
    for scale in (0.0, 0.1, 3.0, 200.0):
        g = GeneratorParams(1.0, 0.2, 20.0)
        a = superoperator(g, 4) * scale
        np.testing.assert_allclose(expm_taylor(a), scipy.linalg.expm(a), atol=1e-11)


def test_rabi_solution():
    g = GeneratorParams(omega0=1.0)
    s0 = initial_state(InitialStateParams(0.0))
    for tau in (math.pi / 4, math.pi / 2):
        traj = evolve_single(s0, g, TimeGrid(tau, stride=1))
        assert traj.states[0][0, 0] == 1
        assert abs(traj.states[-1][0, 0].real - math.cos(tau) ** 2) < 1e-8


def test_rabi_in_tau_units_is_independent_of_omega0():
    s0 = initial_state(InitialStateParams(0.0))
    a = evolve_single(s0, GeneratorParams.normalized(3.0, omega0=1.0), TimeGrid(1.0))
    b = evolve_single(s0, GeneratorParams.normalized(3.0, omega0=7.5), TimeGrid(1.0))
    np.testing.assert_allclose(a.states, b.states, atol=1e-13)


def test_zero_coupling_keeps_purity():
    traj = evolve_single(initial_state(InitialStateParams(1.1, 0.4)), GeneratorParams(1.0), TimeGrid(10))
    assert max(von_neumann_entropy(s) for s in traj.states) < 1e-9


def test_strong_coupling_freezes_left_dot():
    s0 = initial_state(InitialStateParams(0.0))
    strong = evolve_single(s0, GeneratorParams.normalized(40), TimeGrid(1.0)).at(1.0)
    medium = evolve_single(s0, GeneratorParams.normalized(5), TimeGrid(1.0)).at(1.0)
    assert strong[0, 0].real > medium[0, 0].real


def test_pair_unitary_keeps_concurrence():
    traj = evolve_pair_one_sided(singlet(), GeneratorParams(1.0), TimeGrid(5))
    assert all(abs(concurrence(r) - 1) < 1e-6 for r in traj.states)


def test_pair_maximally_mixed_fixed_point():
    traj = evolve_pair_one_sided(I4 / 4, GeneratorParams.normalized(20), TimeGrid(3))
    np.testing.assert_allclose(traj.states, np.broadcast_to(I4 / 4, traj.states.shape), atol=1e-10)


def test_pair_second_dot_tunnelling_is_local():
    g = GeneratorParams.normalized(5)
    with_t2 = evolve_pair_one_sided(singlet(), g, TimeGrid(1), omega0_2=0.8).states[-1]
    oracle = evolve_exact_oracle(singlet(), g, 1.0, omega0_2=0.8)
    np.testing.assert_allclose(with_t2, oracle, atol=1e-8)
    assert concurrence(with_t2) == pytest.approx(
        concurrence(evolve_pair_one_sided(singlet(), g, TimeGrid(1)).states[-1]), abs=1e-8
    )


def test_oracle_identity_at_zero():
    s0 = initial_state(InitialStateParams(0.8, 0.3))
    np.testing.assert_allclose(evolve_exact_oracle(s0, GeneratorParams.normalized(5), 0.0), s0)


def test_oracle_pure_dephasing():
    g = GeneratorParams(omega0=0.0, gamma_d=1.3)
    s0 = 0.5 * (I2 + SIGMA_X)
    for t in (0.5, 2.0):
        assert abs(evolve_exact_oracle(s0, g, t)[0, 1] - 0.5 * math.exp(-1.3 * t / 2)) < 1e-12


def test_rk4_matches_oracle_unitary():
    s0 = initial_state(InitialStateParams(1.0, 0.5))
    g = GeneratorParams(1.0)
    rk = evolve_single(s0, g, TimeGrid(1.0)).states[-1]
    np.testing.assert_allclose(rk, evolve_exact_oracle(s0, g, 1.0), atol=1e-8)


def test_invariants_along_trajectories(rng):
    for alpha in (0.0, 5.0, 50.0):
        g = GeneratorParams.normalized(alpha)
        for rho0 in (random_density(rng, 2), random_density(rng, 4)):
            traj = evolve_batch([rho0], g, TimeGrid(3, stride=10))[0]
            tr = np.trace(traj.states, axis1=1, axis2=2)
            assert np.max(np.abs(tr - 1)) <= 1e-10
            herm = np.abs(traj.states - np.swapaxes(traj.states.conj(), 1, 2)).max()
            assert herm <= 1e-10
            assert np.linalg.eigvalsh(traj.states).min() >= -1e-9


def test_step_halving(rng):
    s0 = random_density(rng, 2)
    g = GeneratorParams.normalized(20, delta=0.3)
    coarse = evolve_single(s0, g, TimeGrid(2.0, dt=1e-3, stride=100))
    fine = evolve_single(s0, g, TimeGrid(2.0, dt=5e-4, stride=200))
    assert np.abs(coarse.states - fine.states).max() <= 1e-9


def test_purity_non_increasing():
    g = GeneratorParams.normalized(3.0)
    for theta in np.linspace(0, 2 * math.pi, 9):
        traj = evolve_single(initial_state(InitialStateParams(theta, 0.7)), g, TimeGrid(5, stride=10))
        purity = np.einsum("nij,nji->n", traj.states, traj.states).real
        assert np.all(np.diff(purity) <= 1e-12)


def test_corrupted_initial_state_is_rejected():
    bad = np.diag([1.2, -0.2]).astype(complex)
    with pytest.raises(NumericalFailure):
        evolve_single(bad, GeneratorParams.normalized(1), TimeGrid(1))


def test_entropy_series_starts_at_zero_for_localized_start():
    traj = evolve_single(initial_state(InitialStateParams(0.0)), GeneratorParams.normalized(7), TimeGrid(2))
    assert entanglement_entropy_series(traj).values[0] == 0


def test_effective_hamiltonian_form_agrees(rng):
    from ddqpc.dynamics import _effective_rhs, generator_operators

    for dim in (2, 4):
        g = GeneratorParams(rng.uniform(0.1, 2), rng.normal(), rng.uniform(0, 30))
        rho = random_density(rng, dim)
        h, proj, gamma = generator_operators(g, dim)
        fast = _effective_rhs(rho, -1j * h - 0.5 * gamma * proj, proj, gamma)
        np.testing.assert_allclose(fast, lindblad_derivative(rho, g), atol=1e-14)
