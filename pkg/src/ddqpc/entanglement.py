"""Entropy, concurrence and entanglement-time measures (all in bits)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import Trajectory
from .errors import NumericalFailure
from .linalg import PSD_TOL, SIGMA_Y, as_matrix, hermitian_eigenvalues

_YY = np.kron(SIGMA_Y, SIGMA_Y)


@dataclass
class EntropySeries:
    taus: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.taus = np.asarray(self.taus, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.taus.shape != self.values.shape:
            raise ValueError("taus and values must have the same length")


@dataclass
class RateSeries:
    taus: np.ndarray
    values: np.ndarray


def clipped_spectrum(rho) -> np.ndarray:
    """Eigenvalues with integrator-sized negatives set to zero, renormalized.

    Eigenvalues below ``-1e-9`` indicate a broken state and raise.
    """
    lam = hermitian_eigenvalues(rho)
    if lam[0] < -PSD_TOL:
        raise NumericalFailure(f"eigenvalue {lam[0]:.3e} below -{PSD_TOL:g}")
    lam = np.clip(lam, 0.0, None)
    return lam / lam.sum()


def von_neumann_entropy(rho) -> float:
    lam = clipped_spectrum(rho)
    lam = lam[lam > 0]
    s = float(-np.sum(lam * np.log2(lam)))
    return s if s > 0 else 0.0


def entanglement_entropy_series(traj: Trajectory) -> EntropySeries:
    """Entropy of each stored state.

    The global (system + detector) state is pure, so this is the entanglement
    between the stored system and the detector.
    """
    return EntropySeries(traj.taus, entropies(traj.states))


def entropies(states) -> np.ndarray:
    """Vectorized :func:`von_neumann_entropy` over a stack of states."""
    states = np.asarray(states, dtype=complex)
    lam = np.linalg.eigvalsh(0.5 * (states + np.swapaxes(states.conj(), -1, -2)))
    worst = lam[..., 0].min()
    if worst < -PSD_TOL:
        raise NumericalFailure(f"eigenvalue {worst:.3e} below -{PSD_TOL:g}")
    lam = np.clip(lam, 0.0, None)
    lam = lam / lam.sum(axis=-1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(lam > 0, -lam * np.log2(lam), 0.0)
    return np.clip(terms.sum(axis=-1), 0.0, None)


def entanglement_rate(s: EntropySeries) -> RateSeries:
    """dS/dtau: central differences inside, second-order one-sided at the ends."""
    taus = s.taus
    if len(taus) < 3:
        raise ValueError("need at least 3 samples for a rate")
    steps = np.diff(taus)
    if np.max(np.abs(steps - steps[0])) > 1e-9 * max(1.0, abs(steps[0])):
        raise ValueError("entanglement_rate requires a uniform tau grid")
    return RateSeries(taus.copy(), np.gradient(s.values, steps[0], edge_order=2))


def concurrence(rho) -> float:
    """Wootters concurrence of a two-qubit state.

    The square roots of the eigenvalues of ``rho (Y(x)Y) rho* (Y(x)Y)`` are
    the singular values of ``sqrt(rho) (Y(x)Y) sqrt(rho)*``; the SVD keeps the
    small ones accurate for rank-deficient states.
    """
    rho = as_matrix(rho)
    if rho.shape != (4, 4):
        raise ValueError("concurrence expects a 4x4 state")
    lam, vecs = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    if lam[0] < -PSD_TOL:
        raise NumericalFailure(f"eigenvalue {lam[0]:.3e} below -{PSD_TOL:g}")
    lam = np.clip(lam, 0.0, None)
    lam = lam / lam.sum()
    sqrt_rho = (vecs * np.sqrt(lam)) @ vecs.conj().T
    mu = np.linalg.svd(sqrt_rho @ _YY @ sqrt_rho.conj(), compute_uv=False)
    return float(min(1.0, max(0.0, mu[0] - mu[1] - mu[2] - mu[3])))


def binary_entropy(x: float) -> float:
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -x * math.log2(x) - (1 - x) * math.log2(1 - x)


def eof_from_concurrence(c: float) -> float:
    return binary_entropy(0.5 * (1 + math.sqrt(max(0.0, 1 - c * c))))


def entropy_of_formation(rho) -> float:
    return eof_from_concurrence(concurrence(rho))


def threshold_time(s: EntropySeries, level: float) -> float | None:
    """First tau where the series reaches ``level``, linearly interpolated."""
    if not level > 0:
        raise ValueError("level must be > 0")
    v = s.values
    hits = np.nonzero(v >= level)[0]
    if hits.size == 0:
        return None
    i = int(hits[0])
    if i == 0:
        return float(s.taus[0])
    t0, t1 = s.taus[i - 1], s.taus[i]
    v0, v1 = v[i - 1], v[i]
    return float(t0 + (level - v0) * (t1 - t0) / (v1 - v0))
