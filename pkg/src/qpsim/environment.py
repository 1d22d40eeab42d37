"""The invasion game, trial loops, and learning-efficiency statistics."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

INTERACTION_MODES = (1, 2)


@dataclass(frozen=True)
class InvasionGame:
    """Attacker shows one of ``n_symbols`` signs; the defender must answer ``correct_map[sign]``."""

    n_symbols: int = 2
    correct_map: tuple[int, ...] | None = None
    percept_distribution: tuple[float, ...] | None = None
    _cdf: np.ndarray = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        n = self.n_symbols
        if n < 2:
            raise ValueError("the invasion game needs at least 2 symbols")
        cmap = tuple(range(n)) if self.correct_map is None else tuple(int(a) for a in self.correct_map)
        if sorted(cmap) != list(range(n)):
            raise ValueError(f"correct_map must be a bijection on 0..{n - 1}, got {cmap}")
        dist = (1.0 / n,) * n if self.percept_distribution is None else tuple(map(float, self.percept_distribution))
        if len(dist) != n or min(dist) < 0 or abs(sum(dist) - 1) > 1e-12:
            raise ValueError(f"percept_distribution must be {n} probabilities summing to 1")
        object.__setattr__(self, "correct_map", cmap)
        object.__setattr__(self, "percept_distribution", dist)
        object.__setattr__(self, "_cdf", np.cumsum(dist))


def next_percept(game: InvasionGame, rng: np.random.Generator) -> int:
    u = rng.random() * game._cdf[-1]
    return min(int(np.searchsorted(game._cdf, u, side="right")), game.n_symbols - 1)


def judge(game: InvasionGame, percept: int, action: int) -> bool:
    return game.correct_map[percept] == action


@dataclass(frozen=True, slots=True)
class TrialRecord:
    trial_index: int
    percept: int
    action: int
    rewarded: bool
    correct_probability: float
    t_star: float | None = None
    correct: bool = False


def _record(i, game, d, rewarded) -> TrialRecord:
    right = game.correct_map[d.percept]
    return TrialRecord(i, d.percept, d.action, rewarded, float(d.probabilities[right]),
                       d.t_star, d.action == right)


def run_trial(agent, game: InvasionGame, rng: np.random.Generator, trial_index: int = 0) -> TrialRecord:
    """Draw a percept, let the agent act, reward it per the game, and update it."""
    p = next_percept(game, rng)
    d = agent.deliberate(p, rng)
    ok = judge(game, p, d.action)
    agent.learn(d, ok)
    return _record(trial_index, game, d, ok)


def run_interacting_trial(agent1, agent2, game: InvasionGame, mode: int, rng: np.random.Generator,
                          trial_index: int = 0) -> tuple[TrialRecord, TrialRecord]:
    """One step of a pair of agents.

    Mode 1: agent 2 perceives the symbol matching agent 1's action and is
    judged by the game. Mode 2: both see the same symbol; agent 2 is rewarded
    only when it copies agent 1's action.
    """
    if mode == 1:
        rec1 = run_trial(agent1, game, rng, trial_index)
        d2 = agent2.deliberate(rec1.action, rng)
        ok2 = judge(game, d2.percept, d2.action)
        agent2.learn(d2, ok2)
        return rec1, _record(trial_index, game, d2, ok2)
    if mode == 2:
        p = next_percept(game, rng)
        d1 = agent1.deliberate(p, rng)
        d2 = agent2.deliberate(p, rng)
        ok1 = judge(game, p, d1.action)
        ok2 = d2.action == d1.action
        agent1.learn(d1, ok1)
        agent2.learn(d2, ok2)
        return _record(trial_index, game, d1, ok1), _record(trial_index, game, d2, ok2)
    raise ValueError(f"interaction mode must be 1 or 2, got {mode!r}")


@dataclass(frozen=True)
class LearningCurve:
    """Per-trial ensemble mean and population std of the learning efficiency.

    ``percept_means[t, i]`` averages only the agents shown symbol ``i`` at
    trial ``t`` (NaN when none were).
    """

    mean: np.ndarray
    std: np.ndarray
    percept_means: np.ndarray

    @property
    def trials(self) -> int:
        return len(self.mean)

    @property
    def n_percepts(self) -> int:
        return self.percept_means.shape[1]


def curve_from_arrays(values, percepts, n_percepts: int) -> LearningCurve:
    """Aggregate (agents, trials) arrays of efficiencies and shown percepts."""
    values = np.asarray(values, dtype=float)
    percepts = np.asarray(percepts)
    if values.ndim != 2 or values.shape != percepts.shape:
        raise ValueError("values and percepts must be matching (agents, trials) arrays")
    pm = np.full((values.shape[1], n_percepts), np.nan)
    for i in range(n_percepts):
        mask = percepts == i
        counts = mask.sum(axis=0)
        sums = np.where(mask, values, 0.0).sum(axis=0)
        pm[:, i] = np.divide(sums, counts, out=np.full(values.shape[1], np.nan), where=counts > 0)
    return LearningCurve(values.mean(axis=0), values.std(axis=0), pm)


def efficiency_values(records, source: str = "probability") -> np.ndarray:
    if source == "probability":
        return np.array([r.correct_probability for r in records])
    if source == "outcome":
        return np.array([float(r.correct) for r in records])
    raise ValueError(f"unknown efficiency source {source!r}")


def efficiency_curve(ensemble, n_percepts: int | None = None, source: str = "probability") -> LearningCurve:
    """Learning curve from one record sequence per agent."""
    ensemble = [list(r) for r in ensemble]
    if not ensemble:
        raise ValueError("empty ensemble")
    lengths = {len(r) for r in ensemble}
    if len(lengths) != 1:
        raise ValueError(f"ragged ensemble: trial counts {sorted(lengths)}")
    values = np.array([efficiency_values(r, source) for r in ensemble])
    percepts = np.array([[rec.percept for rec in r] for r in ensemble])
    if n_percepts is None:
        n_percepts = int(percepts.max()) + 1 if percepts.size else 0
    return curve_from_arrays(values, percepts, n_percepts)
