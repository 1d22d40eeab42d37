"""Dense complex linear algebra helpers and the uniform time grid.

Every system in this package is tiny (Hilbert dimension <= 64), so plain
dense numpy arrays are used throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

TOL = 1e-9


def as_matrix(m) -> np.ndarray:
    """Return ``m`` as a 2-d complex128 array."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.size == 0:
        raise ValueError(f"expected a non-empty 2-d matrix, got shape {a.shape}")
    return a


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def kron_all(*ms) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for m in ms:
        out = np.kron(out, as_matrix(m))
    return out


def is_square(m: np.ndarray) -> bool:
    return m.ndim == 2 and m.shape[0] == m.shape[1]


def hermitian_deviation(m) -> float:
    m = as_matrix(m)
    if not is_square(m):
        return np.inf
    return float(np.max(np.abs(m - m.conj().T)))


def hermitian_check(m, tol: float = TOL) -> bool:
    return hermitian_deviation(m) <= tol


def expm(m) -> np.ndarray:
    """Matrix exponential (Pade scaling-and-squaring)."""
    m = as_matrix(m)
    if not is_square(m):
        raise ValueError(f"expm needs a square matrix, got shape {m.shape}")
    return scipy.linalg.expm(m)


def min_eigenvalue_hermitian(m, tol: float = TOL) -> float:
    m = as_matrix(m)
    if not hermitian_check(m, tol):
        raise ValueError("min_eigenvalue_hermitian: matrix is not Hermitian")
    return float(np.linalg.eigvalsh(0.5 * (m + m.conj().T))[0])


def projector(vec) -> np.ndarray:
    """Outer product |v><v| of a state vector."""
    v = np.asarray(vec, dtype=complex).reshape(-1)
    return np.outer(v, v.conj())


def basis_vector(dim: int, index: int) -> np.ndarray:
    if not 0 <= index < dim:
        raise IndexError(f"basis index {index} out of range for dimension {dim}")
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid of ``n_points`` instants on ``[t_start, t_end]``."""

    t_start: float = 0.0
    t_end: float = 2 * np.pi
    n_points: int = 401

    def __post_init__(self):
        if int(self.n_points) != self.n_points or self.n_points < 2:
            raise ValueError("TimeGrid needs n_points >= 2")
        if not self.t_end > self.t_start:
            raise ValueError("TimeGrid needs t_end > t_start")

    @property
    def dt(self) -> float:
        return (self.t_end - self.t_start) / (self.n_points - 1)

    @property
    def times(self) -> np.ndarray:
        return np.linspace(self.t_start, self.t_end, self.n_points)

    def __len__(self) -> int:
        return self.n_points
