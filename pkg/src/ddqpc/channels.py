"""Process tomography of the detector-induced single-dot channel.

Choi convention: ``J = sum_kl |k><l| (x) Lambda(|k><l|)`` with the input
index slow, so ``J[2k + i, 2l + j] = Lambda(|k><l|)[i, j]`` and
``Tr J = 2``.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .dynamics import GeneratorParams, TimeGrid, Trajectory, evolve_batch
from .errors import NotCompletelyPositive
from .linalg import as_matrix, hermiticity_deviation, ket_to_dm

KRAUS_CUTOFF = 1e-10
CP_TOL = 1e-8

PROBES = np.stack(
    [
        ket_to_dm([1, 0]),
        ket_to_dm([0, 1]),
        ket_to_dm(np.array([1, 1]) / np.sqrt(2)),
        ket_to_dm(np.array([1, 1j]) / np.sqrt(2)),
    ]
)


class CptpReport(NamedTuple):
    min_eigenvalue: float
    tp_deviation: float
    hermiticity_deviation: float


def choi_from_probe_outputs(out_l, out_r, out_plus, out_plus_i) -> np.ndarray:
    """Assemble the Choi matrix from the images of the four probe states."""
    out_lr = out_plus + 1j * out_plus_i - 0.5 * (1 + 1j) * (out_l + out_r)
    blocks = [[out_l, out_lr], [out_lr.conj().T, out_r]]
    return np.block(blocks)


def identity_choi() -> np.ndarray:
    return choi_from_probe_outputs(*PROBES)


def probe_trajectories(g: GeneratorParams, grid: TimeGrid) -> list[Trajectory]:
    return evolve_batch(list(PROBES), g, grid)


def chois_from_trajectories(trajs: list[Trajectory]) -> np.ndarray:
    """Stack of Choi matrices, one per stored sample of the probe runs."""
    return np.stack(
        [choi_from_probe_outputs(*(t.states[i] for t in trajs)) for i in range(len(trajs[0]))]
    )


def tomograph(g: GeneratorParams, tau: float, grid_dt: float = 1e-3) -> np.ndarray:
    """Choi matrix of the evolution map from 0 to ``tau``."""
    if tau < 0:
        raise ValueError("tau must be >= 0")
    if tau == 0:
        return identity_choi()
    n_steps = TimeGrid(tau, grid_dt).n_steps
    trajs = probe_trajectories(g, TimeGrid(tau, grid_dt, stride=n_steps))
    return choi_from_probe_outputs(*(t.states[-1] for t in trajs))


def _choi_tensor(j) -> np.ndarray:
    j = as_matrix(j)
    if j.shape != (4, 4):
        raise ValueError("single-qubit Choi matrices are 4x4")
    return j.reshape(2, 2, 2, 2)  # [k, i, l, j]


def apply_channel(j, sigma) -> np.ndarray:
    """Apply the channel to a 2x2 operator."""
    return np.einsum("kilj,kl->ij", _choi_tensor(j), as_matrix(sigma))


def apply_one_sided(j, rho) -> np.ndarray:
    """``(Lambda (x) I)(rho)`` for a 4x4 state, contracting dot 1's indices."""
    rho = as_matrix(rho)
    if rho.shape != (4, 4):
        raise ValueError("apply_one_sided expects a 4x4 state")
    out = np.einsum("aicj,abcd->ibjd", _choi_tensor(j), rho.reshape(2, 2, 2, 2))
    return out.reshape(4, 4)


def verify_cptp(j) -> CptpReport:
    j = as_matrix(j)
    herm = hermiticity_deviation(j)
    lam_min = float(np.linalg.eigvalsh(0.5 * (j + j.conj().T))[0])
    # tracing out the output index must leave the identity on the input
    reduced = np.einsum("kili->kl", j.reshape(2, 2, 2, 2))
    tp = float(np.max(np.abs(reduced - np.eye(2))))
    return CptpReport(lam_min, tp, herm)


def choi_to_kraus(j) -> list[np.ndarray]:
    """Operator-sum decomposition from the Choi spectrum.

    Each eigenpair ``(mu, v)`` with ``mu > 1e-10`` yields
    ``K[i, k] = sqrt(mu) v[2k + i]``.
    """
    j = as_matrix(j)
    mu, vecs = np.linalg.eigh(0.5 * (j + j.conj().T))
    if mu[0] < -CP_TOL:
        raise NotCompletelyPositive(f"Choi eigenvalue {mu[0]:.3e} below -{CP_TOL:g}")
    ops = []
    for m, v in zip(mu[::-1], vecs.T[::-1]):
        if m > KRAUS_CUTOFF:
            ops.append(np.sqrt(m) * v.reshape(2, 2).T)
    return ops


def apply_kraus(ops, sigma) -> np.ndarray:
    sigma = as_matrix(sigma)
    return sum(k @ sigma @ k.conj().T for k in ops)


def kraus_completeness_deviation(ops) -> float:
    total = sum(k.conj().T @ k for k in ops)
    return float(np.max(np.abs(total - np.eye(2))))
