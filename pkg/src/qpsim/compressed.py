"""Model 2: percepts stored as levels of one d-level register.

Layout is the percept register followed by one qubit per action
(a0 leftmost). A basis index therefore splits as ``j * 2**n_actions + bits``.
Conditioned on percept level ``j``, each action qubit is driven by
``lam[j, a] * sigma_x``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .agent import Deliberation, normalize_or_fail, sample_index, select_at_peak
from .classical import LearningParams, action, percept
from .dynamics import JumpOperator, evolve_closed, evolve_lindblad, observable_series
from .numerics import TimeGrid, basis_vector, kron_all, projector

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_MINUS = np.array([[0, 1], [0, 0]], dtype=complex)
N_QUBIT = np.diag([0.0, 1.0]).astype(complex)
EYE2 = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class CompressedRegister:
    d: int = 2
    n_actions: int = 2

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("percept register needs d >= 2")
        if self.n_actions < 1:
            raise ValueError("need at least one action qubit")

    @property
    def dim(self) -> int:
        return self.d * 2 ** self.n_actions

    def _check(self, j: int, k: int | None = None) -> None:
        if not 0 <= j < self.d:
            raise IndexError(f"percept {j} out of range for d={self.d}")
        if k is not None and not 0 <= k < self.n_actions:
            raise IndexError(f"action {k} out of range for {self.n_actions} actions")

    def index(self, j: int, bits) -> int:
        self._check(j)
        return j * 2 ** self.n_actions + int("".join(str(b) for b in bits) or "0", 2)

    def decompose(self, index: int) -> tuple[int, str]:
        j, rest = divmod(index, 2 ** self.n_actions)
        return j, format(rest, f"0{self.n_actions}b")

    def event_index(self, j: int, k: int) -> int:
        """Index of |j> with only action qubit ``k`` excited."""
        self._check(j, k)
        return self.index(j, [int(a == k) for a in range(self.n_actions)])

    def rest_index(self, j: int) -> int:
        return self.index(j, [0] * self.n_actions)

    def factor(self, percept_op=None, action_ops=None) -> np.ndarray:
        """Tensor product with identities wherever no operator is given."""
        action_ops = action_ops or {}
        ops = [np.eye(self.d, dtype=complex) if percept_op is None else percept_op]
        ops += [action_ops.get(a, EYE2) for a in range(self.n_actions)]
        return kron_all(*ops)


def encode_event(j: int, k: int, reg: CompressedRegister) -> np.ndarray:
    return basis_vector(reg.dim, reg.event_index(j, k))


@dataclass(frozen=True)
class DriveCouplings:
    """``lam[j, a]`` drives action ``a`` under percept level ``j``.

    ``epsilon[0]`` is the percept register's on-site energy, ``epsilon[1 + a]``
    that of action qubit ``a``.
    """

    lam: np.ndarray
    epsilon: np.ndarray = field(default=None)

    def __post_init__(self):
        lam = np.array(self.lam, dtype=float)
        if lam.ndim != 2:
            raise ValueError("lam must be a d x n_actions matrix")
        eps = np.zeros(1 + lam.shape[1]) if self.epsilon is None else np.array(self.epsilon, dtype=float)
        if eps.shape != (1 + lam.shape[1],):
            raise ValueError(f"epsilon needs {1 + lam.shape[1]} entries, got shape {eps.shape}")
        lam.setflags(write=False)
        eps.setflags(write=False)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "epsilon", eps)


def build_hamiltonian(c: DriveCouplings, reg: CompressedRegister) -> np.ndarray:
    if c.lam.shape != (reg.d, reg.n_actions):
        raise ValueError(f"coupling matrix shape {c.lam.shape} != ({reg.d}, {reg.n_actions})")
    h = np.zeros((reg.dim, reg.dim), dtype=complex)
    for j in range(reg.d):
        pj = np.zeros((reg.d, reg.d), dtype=complex)
        pj[j, j] = 1.0
        for a in range(reg.n_actions):
            if c.lam[j, a]:
                h += c.lam[j, a] * reg.factor(pj, {a: SIGMA_X})
    if c.epsilon[0]:
        h += c.epsilon[0] * reg.factor(np.diag(np.arange(reg.d)).astype(complex))
    for a in range(reg.n_actions):
        if c.epsilon[1 + a]:
            h += c.epsilon[1 + a] * reg.factor(None, {a: N_QUBIT})
    return h


def build_projector(j: int, k: int, reg: CompressedRegister) -> np.ndarray:
    """|j><j| on the register, action ``k`` excited, every other action empty."""
    return projector(encode_event(j, k, reg))


def build_jumps(reg: CompressedRegister, decay: float = 0.0, dephasing: float = 0.0) -> list[JumpOperator]:
    """Amplitude damping on each action qubit and dephasing of the percept register."""
    if decay < 0 or dephasing < 0:
        raise ValueError("dissipation rates must be >= 0")
    jumps = []
    if decay > 0:
        jumps += [JumpOperator(reg.factor(None, {a: SIGMA_MINUS}), decay) for a in range(reg.n_actions)]
    if dephasing > 0:
        for j in range(reg.d):
            pj = np.zeros((reg.d, reg.d), dtype=complex)
            pj[j, j] = 1.0
            jumps.append(JumpOperator(reg.factor(pj), dephasing))
    return jumps


def update_couplings(c: DriveCouplings, traversed, rewarded: bool, damping: float, reward: float) -> DriveCouplings:
    if not 0 <= damping <= 1:
        raise ValueError(f"damping must lie in [0, 1], got {damping}")
    if reward < 0:
        raise ValueError(f"reward must be >= 0, got {reward}")
    lam = c.lam - damping * (c.lam - 1.0)
    if rewarded:
        lam[traversed] += reward
    return DriveCouplings(lam, c.epsilon)


class CompressedAgent:
    """Quantum projective-simulation agent, Model 2."""

    kind = "qm2"

    def __init__(self, d: int = 2, n_actions: int | None = None,
                 params: LearningParams = LearningParams(), decay: float = 0.0, dephasing: float = 0.0,
                 grid: TimeGrid = TimeGrid(), peak_strategy: str = "first-local-max",
                 peak_observable: str = "sum", lam0: float = 1.0, couplings: DriveCouplings | None = None):
        self.reg = CompressedRegister(d, d if n_actions is None else n_actions)
        self.n_percepts = d
        self.n_actions = self.reg.n_actions
        self.params = params
        self.grid = grid
        self.peak_strategy = peak_strategy
        self.peak_observable = peak_observable
        self.couplings = couplings if couplings is not None else DriveCouplings(np.full((d, self.n_actions), lam0))
        self.jumps = build_jumps(self.reg, decay, dephasing)
        self._projectors = {}

    def action_series(self, j: int) -> np.ndarray:
        h = build_hamiltonian(self.couplings, self.reg)
        psi0 = basis_vector(self.reg.dim, self.reg.rest_index(j))
        if self.jumps:
            traj = evolve_lindblad(h, self.jumps, projector(psi0), self.grid)
        else:
            traj = evolve_closed(h, psi0, self.grid)
        if j not in self._projectors:
            self._projectors[j] = [build_projector(j, k, self.reg) for k in range(self.n_actions)]
        return np.array([observable_series(traj, p) for p in self._projectors[j]])

    def action_probabilities(self, j: int) -> tuple[np.ndarray, float]:
        raw, t_star = select_at_peak(self.action_series(j), self.grid, self.peak_strategy, self.peak_observable)
        return normalize_or_fail(raw, j), t_star

    def deliberate(self, j: int, rng: np.random.Generator) -> Deliberation:
        probs, t_star = self.action_probabilities(j)
        k = sample_index(probs, rng)
        return Deliberation(j, k, probs, t_star, ((percept(j), action(k)),))

    def learn(self, d: Deliberation, rewarded: bool) -> None:
        self.couplings = update_couplings(self.couplings, (d.percept, d.action), rewarded,
                                          self.params.damping, self.params.reward)
