"""Reduced dynamics of a double dot dephased by a point-contact detector.

The double dot obeys

    d sigma/dt = -i[H, sigma] + Gamma_d (P sigma P - {P, sigma}/2)

with ``H = E1|L><L| + E2|R><R| + Omega0(|L><R| + |R><L|)`` and ``P = |R><R|``.
For the pair of double dots only the first one is coupled to the detector,
so the Hamiltonian becomes ``H (x) I`` and the projector ``P (x) I``.

Integration runs in the dimensionless time ``tau = Omega0 t``. When
``omega0 == 0`` (diagnostic mode) ``tau`` is read as absolute time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import NumericalFailure
from .linalg import I2, PROJ_L, PROJ_R, PSD_TOL, SIGMA_X, as_matrix, check_density_matrix


@dataclass(frozen=True)
class GeneratorParams:
    """Physical parameters of the reduced evolution (hbar = 1).

    ``epsilon`` is the level detuning ``E2 - E1``.
    """

    omega0: float
    epsilon: float = 0.0
    gamma_d: float = 0.0

    def __post_init__(self):
        if self.omega0 < 0:
            raise ValueError("omega0 must be >= 0")
        if self.gamma_d < 0:
            raise ValueError("gamma_d must be >= 0")

    @classmethod
    def normalized(cls, alpha: float, delta: float = 0.0, omega0: float = 1.0):
        return cls(omega0=omega0, epsilon=delta * omega0, gamma_d=alpha * omega0)

    @property
    def alpha(self) -> float:
        return self.gamma_d / self.omega0

    @property
    def delta(self) -> float:
        return self.epsilon / self.omega0

    @property
    def time_scale(self) -> float:
        """Absolute time per unit of tau (1 in diagnostic mode)."""
        return 1.0 / self.omega0 if self.omega0 > 0 else 1.0


@dataclass(frozen=True)
class DetectorParams:
    """Point-contact settings; the right reservoir sits at ``mu_l - vd``."""

    t1: float
    vd: float
    mu_l: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.t1 <= 1.0:
            raise ValueError("transmission t1 must lie in [0, 1]")
        if self.vd < 0:
            raise ValueError("vd must be >= 0")

    @property
    def mu_r(self) -> float:
        return self.mu_l - self.vd

    @property
    def gamma_d(self) -> float:
        return self.t1 * self.vd / (2 * math.pi)

    def generator(self, omega0: float, epsilon: float = 0.0) -> GeneratorParams:
        return GeneratorParams(omega0=omega0, epsilon=epsilon, gamma_d=self.gamma_d)


@dataclass(frozen=True)
class InitialStateParams:
    theta: float
    phi: float = 0.0

    def __post_init__(self):
        for name in ("theta", "phi"):
            v = getattr(self, name)
            if not 0.0 <= v <= 2 * math.pi + 1e-12:
                raise ValueError(f"{name} must lie in [0, 2*pi], got {v}")


@dataclass(frozen=True)
class TimeGrid:
    """Uniform integration grid in tau.

    When ``tau_max`` is not a whole number of steps the step is shrunk so the
    last step lands exactly on ``tau_max``.
    """

    tau_max: float
    dt: float = 1e-3
    stride: int = 100

    def __post_init__(self):
        if not self.tau_max > 0:
            raise ValueError("tau_max must be > 0")
        if not 0 < self.dt <= 0.01:
            raise ValueError(f"dt must lie in (0, 0.01], got {self.dt}")
        if self.tau_max / self.dt > 1e8:
            raise ValueError("tau_max/dt exceeds 1e8 steps")
        if int(self.stride) != self.stride or self.stride < 1:
            raise ValueError("stride must be a positive integer")

    @property
    def n_steps(self) -> int:
        return max(1, math.ceil(self.tau_max / self.dt - 1e-9))

    @property
    def step(self) -> float:
        return self.tau_max / self.n_steps

    @property
    def taus(self) -> np.ndarray:
        idx = np.arange(0, self.n_steps + 1, self.stride)
        return idx * self.step


@dataclass
class Trajectory:
    grid: TimeGrid
    taus: np.ndarray
    states: np.ndarray = field(repr=False)

    def __len__(self):
        return len(self.taus)

    def at(self, tau: float, tol: float = 1e-9) -> np.ndarray:
        """Stored state whose sample time equals ``tau``."""
        i = int(np.argmin(np.abs(self.taus - tau)))
        if abs(self.taus[i] - tau) > tol:
            raise KeyError(f"tau={tau} is not a stored sample")
        return self.states[i]


def initial_state(p: InitialStateParams) -> np.ndarray:
    c = math.cos(p.theta / 2)
    s = math.sin(p.theta / 2)
    s11 = c * c
    s12 = s * c * complex(math.cos(p.phi), -math.sin(p.phi))
    return np.array([[s11, s12], [s12.conjugate(), 1.0 - s11]], dtype=complex)


def hamiltonian(g: GeneratorParams, e1: float = 0.0) -> np.ndarray:
    """Double-dot Hamiltonian with ``E1 = e1`` and ``E2 = e1 + epsilon``."""
    return e1 * PROJ_L + (e1 + g.epsilon) * PROJ_R + g.omega0 * SIGMA_X


def generator_operators(g: GeneratorParams, dim: int, omega0_2: float = 0.0):
    """Hamiltonian, measured projector and rate for a 2x2 or one-sided 4x4 state."""
    h = hamiltonian(g)
    if dim == 2:
        if omega0_2:
            raise ValueError("omega0_2 only applies to the 4x4 pair state")
        return h, PROJ_R.copy(), g.gamma_d
    if dim == 4:
        h4 = np.kron(h, I2) + omega0_2 * np.kron(I2, SIGMA_X)
        return h4, np.kron(PROJ_R, I2), g.gamma_d
    raise ValueError(f"unsupported state dimension {dim}")


def _lindblad_rhs(rho, h, proj, gamma):
    """-i[H, rho] + gamma (P rho P - {P, rho}/2); broadcasts over leading axes."""
    p_rho = proj @ rho
    rho_p = rho @ proj
    return -1j * (h @ rho - rho @ h) + gamma * (p_rho @ proj - 0.5 * (p_rho + rho_p))


def lindblad_derivative(sigma, g: GeneratorParams, omega0_2: float = 0.0) -> np.ndarray:
    """Time derivative of a 2x2 state, or of a 4x4 pair state with dot 1 monitored.

    Absolute time units.
    """
    sigma = as_matrix(sigma)
    h, proj, gamma = generator_operators(g, sigma.shape[0], omega0_2)
    return _lindblad_rhs(sigma, h, proj, gamma)


def bloch_derivative(sigma, g: GeneratorParams) -> np.ndarray:
    """Component form of :func:`lindblad_derivative` for a single double dot."""
    s = as_matrix(sigma)
    if s.shape != (2, 2):
        raise ValueError("bloch_derivative expects a 2x2 state")
    w, eps, gam = g.omega0, g.epsilon, g.gamma_d
    d11 = 1j * w * (s[0, 1] - s[1, 0])
    d12 = 1j * eps * s[0, 1] + 1j * w * (s[0, 0] - s[1, 1]) - 0.5 * gam * s[0, 1]
    d21 = -1j * eps * s[1, 0] - 1j * w * (s[0, 0] - s[1, 1]) - 0.5 * gam * s[1, 0]
    return np.array([[d11, d12], [d21, -d11]], dtype=complex)


def _effective_rhs(rho, g_eff, proj, gamma):
    """Same generator as :func:`_lindblad_rhs`, written as
    ``G rho + (G rho)^dagger + gamma P rho P`` with ``G = -iH - gamma P/2``.

    Valid for Hermitian ``rho``; three matrix products instead of five.
    """
    a = g_eff @ rho
    return a + np.swapaxes(a.conj(), -1, -2) + gamma * (proj @ rho @ proj)


def _rk4(states, h, proj, gamma, n_steps, dt, stride):
    """Fixed-step RK4 on a batch of states, keeping every ``stride``-th step.

    ``h`` and ``gamma`` are already in tau units and broadcast against
    ``states`` (shape ``(..., d, d)``).
    """
    rho = np.array(states, dtype=complex)
    g_eff = -1j * h - 0.5 * gamma * proj
    n_out = n_steps // stride + 1
    out = np.empty((n_out,) + rho.shape, dtype=complex)
    out[0] = rho
    half = 0.5 * dt
    sixth = dt / 6.0
    for step in range(1, n_steps + 1):
        k1 = _effective_rhs(rho, g_eff, proj, gamma)
        k2 = _effective_rhs(rho + half * k1, g_eff, proj, gamma)
        k3 = _effective_rhs(rho + half * k2, g_eff, proj, gamma)
        k4 = _effective_rhs(rho + dt * k3, g_eff, proj, gamma)
        rho = rho + sixth * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        rho = 0.5 * (rho + np.swapaxes(rho.conj(), -1, -2))
        tr = rho.diagonal(0, -2, -1).real.sum(-1)
        if np.abs(tr - 1.0).max() > 1e-12:
            rho = rho / tr[..., None, None]
        if step % stride == 0:
            out[step // stride] = rho
    return out


def _check_positivity(taus, states):
    lam_min = np.linalg.eigvalsh(states)[..., 0]
    worst = lam_min.reshape(len(taus), -1).min(axis=1)
    bad = np.nonzero(worst < -PSD_TOL)[0]
    if bad.size:
        i = int(bad[0])
        raise NumericalFailure(
            f"state at tau={taus[i]:.6g} has eigenvalue {worst[i]:.3e} "
            f"below positivity tolerance -{PSD_TOL:g}",
            tau=float(taus[i]),
        )


def evolve_batch(
    states0: Sequence[np.ndarray],
    params: GeneratorParams | Sequence[GeneratorParams],
    grid: TimeGrid,
    omega0_2: float = 0.0,
) -> list[Trajectory]:
    """Integrate several states of the same dimension in lockstep.

    ``params`` is either shared or given per state. All generators must
    agree on ``omega0`` because they share one tau grid.
    """
    rho0 = np.stack([as_matrix(s) for s in states0])
    dim = rho0.shape[-1]
    for s in rho0:
        check_density_matrix(s)
    if isinstance(params, GeneratorParams):
        params = [params] * len(rho0)
    if len(params) != len(rho0):
        raise ValueError("need one GeneratorParams per state")
    scales = {g.time_scale for g in params}
    if len(scales) != 1:
        raise ValueError("batched generators must share omega0")
    scale = scales.pop()
    ops = [generator_operators(g, dim, omega0_2) for g in params]
    h = np.stack([o[0] for o in ops]) * scale
    proj = ops[0][1]
    gamma = np.array([o[2] for o in ops])[:, None, None] * scale
    path = _rk4(rho0, h, proj, gamma, grid.n_steps, grid.step, grid.stride)
    taus = grid.taus
    _check_positivity(taus, path)
    return [Trajectory(grid, taus, path[:, b]) for b in range(len(rho0))]


def evolve_single(sigma0, g: GeneratorParams, grid: TimeGrid) -> Trajectory:
    """RK4 trajectory of a single double dot.

    Step ``grid.dt`` is in tau, i.e. an absolute step ``dt/omega0``.
    ``omega0 == 0`` runs in diagnostic mode with tau read as absolute time.
    """
    sigma0 = as_matrix(sigma0)
    if sigma0.shape != (2, 2):
        raise ValueError("evolve_single expects a 2x2 state")
    return evolve_batch([sigma0], g, grid)[0]


def evolve_pair_one_sided(
    rho0, g: GeneratorParams, grid: TimeGrid, omega0_2: float = 0.0
) -> Trajectory:
    """RK4 trajectory of a double-dot pair where only dot 1 sees the detector.

    Dot 2 evolves trivially unless ``omega0_2`` adds its own tunnelling term.
    """
    rho0 = as_matrix(rho0)
    if rho0.shape != (4, 4):
        raise ValueError("evolve_pair_one_sided expects a 4x4 state")
    return evolve_batch([rho0], g, grid, omega0_2)[0]


# --- independent oracle: explicit superoperator + matrix exponential ------


def vec(m: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization."""
    return np.asarray(m).T.reshape(-1)


def unvec(v: np.ndarray) -> np.ndarray:
    d = math.isqrt(v.size)
    return np.asarray(v).reshape(d, d).T


def superoperator(g: GeneratorParams, dim: int, omega0_2: float = 0.0) -> np.ndarray:
    """Matrix ``L`` with ``vec(d rho/dt) = L vec(rho)`` (column stacking).

    Uses ``vec(A X B) = (B^T (x) A) vec(X)``.
    """
    h, proj, gamma = generator_operators(g, dim, omega0_2)
    eye = np.eye(dim)
    pp = proj.conj().T @ proj
    ham = -1j * (np.kron(eye, h) - np.kron(h.T, eye))
    diss = np.kron(proj.conj(), proj) - 0.5 * (np.kron(eye, pp) + np.kron(pp.T, eye))
    return ham + gamma * diss


def expm_taylor(a: np.ndarray) -> np.ndarray:
    """Matrix exponential by scaling and squaring of a truncated Taylor series.

    Terms are summed until a term's norm falls below 1e-18 of the running sum.
    """
    a = np.asarray(a, dtype=complex)
    norm = np.linalg.norm(a, 1)
    squarings = max(0, math.ceil(math.log2(norm))) + 1 if norm > 0.5 else 0
    b = a / (2.0**squarings)
    result = np.eye(a.shape[0], dtype=complex)
    term = np.eye(a.shape[0], dtype=complex)
    for k in range(1, 200):
        term = term @ b / k
        result = result + term
        if np.linalg.norm(term, 1) <= 1e-18 * np.linalg.norm(result, 1):
            break
    for _ in range(squarings):
        result = result @ result
    return result


def evolve_exact_oracle(state0, g: GeneratorParams, tau: float, omega0_2: float = 0.0):
    """Propagate ``state0`` to ``tau`` with ``exp(L t)`` applied to ``vec(state0)``."""
    state0 = as_matrix(state0)
    t = tau * g.time_scale
    prop = expm_taylor(superoperator(g, state0.shape[0], omega0_2) * t)
    return unvec(prop @ vec(state0))
