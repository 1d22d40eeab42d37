"""Closed and open (Lindblad) evolution on a uniform time grid.

Closed runs step a state vector with one reused propagator
``expm(-i H dt)``. Open runs integrate

    drho/dt = -i[H, rho] + sum_k rate_k (L rho L^+ - 1/2 {L^+ L, rho})

with fixed-step RK4. Because the generator is linear and time independent,
one RK4 step is the degree-4 Taylor polynomial of ``h * generator``; it is
built once per run and applied as a matrix on vectorized density matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
import numpy as np

from .numerics import TOL, TimeGrid, as_matrix, expm, hermitian_check, hermitian_deviation, projector

# Largest |h * ||generator||| allowed for one internal RK4 sub-step.
RK4_MAX_STEP_NORM = 0.01
TRACE_DRIFT_LIMIT = 1e-6

PEAK_STRATEGIES = ("global-max", "first-local-max")


class IntegrationError(RuntimeError):
    """Raised when a Lindblad run drifts off the space of density matrices."""


@dataclass(frozen=True)
class JumpOperator:
    matrix: np.ndarray
    rate: float

    def __post_init__(self):
        m = as_matrix(self.matrix)
        if m.shape[0] != m.shape[1]:
            raise ValueError("jump operator must be square")
        if self.rate < 0:
            raise ValueError(f"jump rate must be >= 0, got {self.rate}")
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True)
class Trajectory:
    """States on a grid: shape (n, dim) for kets, (n, dim, dim) for density matrices."""

    grid: TimeGrid
    states: np.ndarray

    @property
    def is_pure(self) -> bool:
        return self.states.ndim == 2

    def density_matrices(self) -> np.ndarray:
        if not self.is_pure:
            return self.states
        return np.einsum("ni,nj->nij", self.states, self.states.conj())


def _check_hamiltonian(h, dim=None) -> np.ndarray:
    h = as_matrix(h)
    if h.shape[0] != h.shape[1]:
        raise ValueError(f"Hamiltonian must be square, got {h.shape}")
    if not hermitian_check(h):
        raise ValueError(f"Hamiltonian is not Hermitian (deviation {hermitian_deviation(h):.3e})")
    if dim is not None and h.shape[0] != dim:
        raise ValueError(f"dimension mismatch: H is {h.shape[0]}, state is {dim}")
    return h


def evolve_closed(h, psi0, grid: TimeGrid) -> Trajectory:
    psi = np.asarray(psi0, dtype=complex).reshape(-1)
    h = _check_hamiltonian(h, psi.size)
    if abs(np.linalg.norm(psi) - 1) > TOL:
        raise ValueError("initial state is not normalized")
    u = expm(-1j * grid.dt * h)
    out = np.empty((grid.n_points, psi.size), dtype=complex)
    out[0] = psi
    for n in range(1, grid.n_points):
        psi = u @ psi
        out[n] = psi
    return Trajectory(grid, out)


def _kron(a, b):
    # np.kron has noticeable call overhead at these sizes
    return (a[:, None, :, None] * b[None, :, None, :]).reshape(a.shape[0] * b.shape[0], -1)


def lindblad_generator(h, jumps=()) -> np.ndarray:
    """Superoperator acting on row-major ``rho.reshape(-1)``.

    Uses vec(A rho B) = (A kron B^T) vec(rho).
    """
    h = as_matrix(h)
    dim = h.shape[0]
    eye = np.eye(dim)
    gen = -1j * (_kron(h, eye) - _kron(eye, h.T))
    for jump in jumps:
        if jump.rate == 0:
            continue
        l = jump.matrix
        if l.shape != h.shape:
            raise ValueError(f"jump operator shape {l.shape} does not match H {h.shape}")
        ldl = l.conj().T @ l
        gen += jump.rate * (_kron(l, l.conj()) - 0.5 * _kron(ldl, eye) - 0.5 * _kron(eye, ldl.T))
    return gen


def rk4_propagator(gen: np.ndarray, dt: float, max_step_norm: float | None = None) -> np.ndarray:
    """Map advancing vec(rho) by ``dt`` using equal RK4 sub-steps.

    The sub-step count keeps ``h * ||gen||_1`` at or below ``max_step_norm``.
    """
    if max_step_norm is None:
        max_step_norm = RK4_MAX_STEP_NORM
    norm = np.linalg.norm(gen, 1)
    n_sub = max(1, int(np.ceil(dt * norm / max_step_norm)))
    z = (dt / n_sub) * gen
    step = np.eye(gen.shape[0], dtype=complex)
    term = np.eye(gen.shape[0], dtype=complex)
    for k in range(1, 5):
        term = term @ z / k
        step = step + term
    return np.linalg.matrix_power(step, n_sub)


def evolve_lindblad(h, jumps, rho0, grid: TimeGrid) -> Trajectory:
    rho = as_matrix(rho0)
    dim = rho.shape[0]
    h = _check_hamiltonian(h, dim)
    if not hermitian_check(rho) or abs(np.trace(rho).real - 1) > TOL:
        raise ValueError("rho0 is not a valid density matrix")
    if np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0] < -TOL:
        raise ValueError("rho0 is not positive semidefinite")

    prop = rk4_propagator(lindblad_generator(h, jumps), grid.dt)
    # vec(rho^+) = conj(vec(rho)[perm])
    perm = np.arange(dim * dim).reshape(dim, dim).T.reshape(-1)
    diag = np.arange(dim) * (dim + 1)

    out = np.empty((grid.n_points, dim * dim), dtype=complex)
    v = rho.reshape(-1).copy()
    out[0] = v
    with np.errstate(over="ignore", invalid="ignore"):
        for n in range(1, grid.n_points):
            v = prop @ v
            v = 0.5 * (v + v[perm].conj())
            out[n] = v
        traces = out[:, diag].real.sum(axis=1)
        drift = np.abs(traces - 1)
        purity = np.einsum("ni,ni->n", out, out.conj()).real
    # written as negations so NaN counts as failure
    bad = np.flatnonzero(~(drift <= TRACE_DRIFT_LIMIT))
    if bad.size:
        raise IntegrationError(f"trace drift {drift[bad[0]]:.3e} at grid step {bad[0]}")
    bad = np.flatnonzero(~(purity <= 1 + TRACE_DRIFT_LIMIT))
    if bad.size:
        raise IntegrationError(f"unstable integration (purity {purity[bad[0]]:.3e}) at grid step {bad[0]}")
    return Trajectory(grid, out.reshape(grid.n_points, dim, dim))


def check_projector(p, tol: float = TOL) -> np.ndarray:
    p = as_matrix(p)
    if p.shape[0] != p.shape[1] or not hermitian_check(p, tol) or np.max(np.abs(p @ p - p)) > tol:
        raise ValueError("observable must be a Hermitian projector")
    return p


def observable_series(traj: Trajectory, p) -> np.ndarray:
    """tr(p rho(t_n)) for every grid point, clamped to [0, 1]."""
    p = check_projector(p)
    s = traj.states
    if s.shape[1] != p.shape[0]:
        raise ValueError(f"dimension mismatch: projector {p.shape[0]}, states {s.shape[1]}")
    if traj.is_pure:
        vals = np.einsum("ni,ij,nj->n", s.conj(), p, s).real
    else:
        vals = np.einsum("ij,nji->n", p, s).real
    return np.clip(vals, 0.0, 1.0)


def first_peak_index(series, strategy: str = "global-max") -> int:
    s = np.asarray(series, dtype=float)
    if s.size == 0:
        raise ValueError("empty series")
    if strategy == "global-max":
        return int(np.flatnonzero(s >= s.max() - 1e-12)[0])
    if strategy == "first-local-max":
        d = np.diff(s)
        rising = np.concatenate(([True], d[:-1] > 0))
        hits = np.flatnonzero((d <= 0) & rising)
        return int(hits[0]) if hits.size else s.size - 1
    raise ValueError(f"unknown peak strategy {strategy!r}; expected one of {PEAK_STRATEGIES}")


def first_peak_time(series, grid: TimeGrid, strategy: str = "global-max") -> tuple[int, float]:
    """Index and time of the first attainment of the series maximum.

    ``strategy="first-local-max"`` instead stops at the first local maximum.
    """
    n = first_peak_index(series, strategy)
    return n, float(grid.t_start + n * grid.dt)


def pure_density(psi) -> np.ndarray:
    return projector(psi)
