"""Small dense complex-matrix kernel for 2x2 and 4x4 density matrices.

Basis conventions used throughout the package:

* single double dot: ``|L> = |1>`` (index 0), ``|R> = |2>`` (index 1);
* pair of double dots: ``{LL, LR, RL, RR}``, the first (monitored) dot is
  the slow index.
"""

from __future__ import annotations

import numpy as np

from .errors import NumericalFailure

MAX_DIM = 16

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-9

KET_L = np.array([1.0, 0.0], dtype=complex)
KET_R = np.array([0.0, 1.0], dtype=complex)
PROJ_L = np.diag([1.0, 0.0]).astype(complex)
PROJ_R = np.diag([0.0, 1.0]).astype(complex)
I2 = np.eye(2, dtype=complex)
I4 = np.eye(4, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def as_matrix(m) -> np.ndarray:
    """Return ``m`` as a square complex ndarray, rejecting anything else."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] > MAX_DIM:
        raise ValueError(f"dimension {a.shape[0]} exceeds supported maximum {MAX_DIM}")
    return a


def ket_to_dm(ket) -> np.ndarray:
    ket = np.asarray(ket, dtype=complex).ravel()
    return np.outer(ket, ket.conj())


def singlet() -> np.ndarray:
    """Density matrix of ``(|LR> - |RL>)/sqrt(2)``."""
    psi = np.array([0.0, 1.0, -1.0, 0.0], dtype=complex) / np.sqrt(2.0)
    return ket_to_dm(psi)


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product ``a (x) b``; the result may be at most 16x16."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape[0] * b.shape[0] > MAX_DIM:
        raise ValueError(
            f"tensor product dimension {a.shape[0] * b.shape[0]} exceeds {MAX_DIM}"
        )
    return np.kron(a, b)


def partial_trace(rho, keep: int) -> np.ndarray:
    """Reduce a two-qubit state to subsystem ``keep`` (1 or 2)."""
    rho = as_matrix(rho)
    if rho.shape != (4, 4):
        raise ValueError("partial_trace expects a 4x4 matrix")
    t = rho.reshape(2, 2, 2, 2)
    if keep == 1:
        return np.einsum("ikjk->ij", t)
    if keep == 2:
        return np.einsum("kikj->ij", t)
    raise ValueError(f"keep must be 1 or 2, got {keep!r}")


def hermitian_eigenvalues(m) -> np.ndarray:
    """Ascending real eigenvalues of a Hermitian matrix.

    The input is symmetrized as ``(M + M^dagger)/2`` first; anything further
    than 1e-8 from Hermitian is refused.
    """
    m = as_matrix(m)
    if hermiticity_deviation(m) > 1e-8:
        raise ValueError("matrix is not Hermitian within 1e-8")
    h = 0.5 * (m + m.conj().T)
    try:
        return np.linalg.eigvalsh(h)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"eigenvalue iteration did not converge: {exc}") from exc


def hermiticity_deviation(m) -> float:
    m = np.asarray(m, dtype=complex)
    return float(np.max(np.abs(m - m.conj().T)))


def frobenius_distance(a, b) -> float:
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(np.sqrt(np.sum(np.abs(a - b) ** 2)))


def check_density_matrix(rho, *, psd_tol: float = PSD_TOL) -> np.ndarray:
    """Validate Hermiticity, unit trace and positivity; return the matrix.

    Raises ``ValueError`` for shape, Hermiticity or trace problems and
    ``NumericalFailure`` when the smallest eigenvalue is below ``-psd_tol``.
    """
    rho = as_matrix(rho)
    if rho.shape[0] not in (2, 4):
        raise ValueError(f"density matrices must be 2x2 or 4x4, got {rho.shape}")
    if hermiticity_deviation(rho) > HERMITIAN_TOL:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > TRACE_TOL:
        raise ValueError(f"density matrix trace {np.trace(rho).real:.3g} != 1")
    lam_min = hermitian_eigenvalues(rho)[0]
    if lam_min < -psd_tol:
        raise NumericalFailure(f"density matrix has eigenvalue {lam_min:.3e} < -{psd_tol:g}")
    return rho
