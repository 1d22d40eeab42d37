"""Model 1: each clip is an excitation mode and deliberation is a quantum walk.

The hopping Hamiltonian and the hopping / decay jumps all act within the
single-excitation sector, so the dynamics run on ``n_clips`` basis states,
plus an explicit vacuum state when amplitude decay is switched on. The full
qubit-register (Fock) construction is kept for cross-checking that reduction.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .agent import Deliberation, normalize_or_fail, sample_index, select_at_peak
from .classical import Clip, LearningParams, action, percept
from .dynamics import JumpOperator, evolve_closed, evolve_lindblad, observable_series
from .numerics import TimeGrid, basis_vector, kron_all, projector

MAX_FOCK_CLIPS = 4

SIGMA_MINUS = np.array([[0, 1], [0, 0]], dtype=complex)  # |0><1|: removes an excitation
EYE2 = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class ExcitationBasis:
    """Single-excitation basis; the vacuum, when present, is index 0."""

    mode_labels: tuple[Clip, ...]
    include_vacuum: bool = False

    def __post_init__(self):
        if len(set(self.mode_labels)) != len(self.mode_labels):
            raise ValueError("mode labels must be distinct")

    @property
    def dim(self) -> int:
        return len(self.mode_labels) + int(self.include_vacuum)

    @property
    def vacuum_index(self) -> int:
        if not self.include_vacuum:
            raise ValueError("basis has no vacuum state")
        return 0

    def index(self, clip: Clip) -> int:
        try:
            return self.mode_labels.index(clip) + int(self.include_vacuum)
        except ValueError:
            raise KeyError(f"clip {clip} is not in the basis") from None

    def ket(self, clip: Clip) -> np.ndarray:
        return basis_vector(self.dim, self.index(clip))


def _edge_key(j: Clip, k: Clip) -> tuple[Clip, Clip]:
    # couplings are symmetric, stored once per unordered pair
    return (j, k) if j <= k else (k, j)


@dataclass(frozen=True)
class CouplingSpec:
    """Couplings ``lam`` per edge, on-site energies, hopping rates ``kappa``, decay rate."""

    lam: dict = field(default_factory=dict)
    epsilon: dict = field(default_factory=dict)
    kappa: dict = field(default_factory=dict)
    decay: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "lam", {_edge_key(*e): float(v) for e, v in self.lam.items()})
        if any(v < 0 for v in self.kappa.values()):
            raise ValueError("hopping rates kappa must be >= 0")
        if self.decay < 0:
            raise ValueError("decay rate must be >= 0")

    def coupling(self, j: Clip, k: Clip) -> float:
        return self.lam.get(_edge_key(j, k), 0.0)

    def clips(self) -> set[Clip]:
        out = set(self.epsilon)
        for e in list(self.lam) + list(self.kappa):
            out.update(e)
        return out


def invasion_couplings(n_percepts: int = 2, n_actions: int | None = None, lam0: float = 1.0,
                       kappa: float = 0.0, decay: float = 0.0) -> CouplingSpec:
    n_actions = n_percepts if n_actions is None else n_actions
    edges = [(percept(i), action(k)) for i in range(n_percepts) for k in range(n_actions)]
    return CouplingSpec(
        lam={e: lam0 for e in edges},
        kappa={e: kappa for e in edges} if kappa > 0 else {},
        decay=decay,
    )


def _check_clips(spec: CouplingSpec, labels) -> None:
    unknown = spec.clips() - set(labels)
    if unknown:
        raise ValueError(f"couplings reference unknown clips: {sorted(map(str, unknown))}")


def build_hamiltonian_sector(spec: CouplingSpec, basis: ExcitationBasis) -> np.ndarray:
    _check_clips(spec, basis.mode_labels)
    h = np.zeros((basis.dim, basis.dim), dtype=complex)
    for (j, k), lam in spec.lam.items():
        a, b = basis.index(j), basis.index(k)
        h[a, b] = h[b, a] = lam
    for c, eps in spec.epsilon.items():
        h[basis.index(c), basis.index(c)] = eps
    return h


def _mode_operator(op: np.ndarray, mode: int, n_modes: int) -> np.ndarray:
    return kron_all(*[op if m == mode else EYE2 for m in range(n_modes)])


def fock_lowering_operators(n_modes: int) -> list[np.ndarray]:
    """Qubit lowering operator for each mode; mode 0 is the leftmost tensor factor."""
    if n_modes > MAX_FOCK_CLIPS:
        raise ValueError(f"full register build is capped at {MAX_FOCK_CLIPS} clips, got {n_modes}")
    return [_mode_operator(SIGMA_MINUS, m, n_modes) for m in range(n_modes)]


def fock_state(excited, n_modes: int) -> np.ndarray:
    """c_1^+ ... c_l^+ |vac> for the given modes, i.e. a (composite) clip state."""
    bits = ["1" if m in set(excited) else "0" for m in range(n_modes)]
    return basis_vector(2 ** n_modes, int("".join(bits), 2))


def build_hamiltonian_fock(spec: CouplingSpec, labels) -> np.ndarray:
    """Register-space Hamiltonian on 2**n states, one qubit per clip in ``labels``."""
    labels = tuple(labels)
    _check_clips(spec, labels)
    c = fock_lowering_operators(len(labels))
    where = {clip: m for m, clip in enumerate(labels)}
    h = np.zeros((2 ** len(labels),) * 2, dtype=complex)
    for (j, k), lam in spec.lam.items():
        cj, ck = c[where[j]], c[where[k]]
        h += lam * (ck.conj().T @ cj + ck @ cj.conj().T)
    for clip, eps in spec.epsilon.items():
        cj = c[where[clip]]
        h += eps * (cj.conj().T @ cj)
    return h


def fock_number_operator(n_modes: int) -> np.ndarray:
    return sum(cj.conj().T @ cj for cj in fock_lowering_operators(n_modes))


def build_jumps(spec: CouplingSpec, basis: ExcitationBasis) -> list[JumpOperator]:
    """Hopping jumps |c_k><c_j| per edge j->k with kappa > 0, and decay jumps |vac><c_j|."""
    _check_clips(spec, basis.mode_labels)
    if spec.decay > 0 and not basis.include_vacuum:
        raise ValueError("amplitude decay needs a vacuum state in the basis")
    jumps = []
    for (j, k), rate in spec.kappa.items():
        if rate > 0:
            m = np.outer(basis.ket(k), basis.ket(j))
            jumps.append(JumpOperator(m, rate))
    if spec.decay > 0:
        vac = basis_vector(basis.dim, basis.vacuum_index)
        for clip in basis.mode_labels:
            jumps.append(JumpOperator(np.outer(vac, basis.ket(clip)), spec.decay))
    return jumps


def update_couplings(spec: CouplingSpec, edge, rewarded: bool, damping: float, reward: float) -> CouplingSpec:
    """Damp every coupling toward 1; add ``reward`` to the traversed edge if rewarded."""
    if not 0 <= damping <= 1:
        raise ValueError(f"damping must lie in [0, 1], got {damping}")
    if reward < 0:
        raise ValueError(f"reward must be >= 0, got {reward}")
    lam = {e: v - damping * (v - 1.0) for e, v in spec.lam.items()}
    if rewarded:
        key = _edge_key(*edge)
        lam[key] = lam.get(key, 1.0) + reward
    return replace(spec, lam=lam)


class ExcitationAgent:
    """Quantum projective-simulation agent, Model 1."""

    kind = "qm1"

    def __init__(self, n_percepts: int = 2, n_actions: int | None = None,
                 params: LearningParams = LearningParams(), kappa: float = 0.0, decay: float = 0.0,
                 grid: TimeGrid = TimeGrid(), peak_strategy: str = "first-local-max",
                 peak_observable: str = "sum", lam0: float = 1.0, spec: CouplingSpec | None = None):
        self.n_percepts = n_percepts
        self.n_actions = n_percepts if n_actions is None else n_actions
        self.params = params
        self.grid = grid
        self.peak_strategy = peak_strategy
        self.peak_observable = peak_observable
        if spec is None:
            spec = invasion_couplings(n_percepts, self.n_actions, lam0, kappa, decay)
        self.spec = spec
        labels = tuple(percept(i) for i in range(n_percepts)) + tuple(action(k) for k in range(self.n_actions))
        self.basis = ExcitationBasis(labels, include_vacuum=spec.decay > 0)
        self._projectors = [projector(self.basis.ket(action(k))) for k in range(self.n_actions)]

    def action_series(self, p: int):
        """Populations of every action clip over the grid, starting from |p>."""
        h = build_hamiltonian_sector(self.spec, self.basis)
        jumps = build_jumps(self.spec, self.basis)
        psi0 = self.basis.ket(percept(p))
        if jumps:
            traj = evolve_lindblad(h, jumps, projector(psi0), self.grid)
        else:
            traj = evolve_closed(h, psi0, self.grid)
        return np.array([observable_series(traj, p) for p in self._projectors])

    def action_probabilities(self, p: int) -> tuple[np.ndarray, float]:
        raw, t_star = select_at_peak(self.action_series(p), self.grid, self.peak_strategy, self.peak_observable)
        return normalize_or_fail(raw, p), t_star

    def deliberate(self, p: int, rng: np.random.Generator) -> Deliberation:
        probs, t_star = self.action_probabilities(p)
        k = sample_index(probs, rng)
        return Deliberation(p, k, probs, t_star, ((percept(p), action(k)),))

    def learn(self, d: Deliberation, rewarded: bool) -> None:
        self.spec = update_couplings(self.spec, d.path[0], rewarded, self.params.damping, self.params.reward)
