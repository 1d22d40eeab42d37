"""Types shared by the three agent variants."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class DeliberationError(RuntimeError):
    """The agent could not produce an action distribution."""


@dataclass(frozen=True)
class Deliberation:
    """Outcome of one deliberation.

    ``probabilities`` is the normalized distribution over action indices the
    action was sampled from. ``t_star`` is None for classical agents.
    """

    percept: int
    action: int
    probabilities: np.ndarray
    t_star: float | None = None
    path: tuple = field(default=())


def sample_index(probabilities: np.ndarray, rng: np.random.Generator) -> int:
    cdf = np.cumsum(probabilities)
    u = rng.random() * cdf[-1]
    return min(int(np.searchsorted(cdf, u, side="right")), len(cdf) - 1)


def normalize_or_fail(p: np.ndarray, percept: int) -> np.ndarray:
    total = float(np.sum(p))
    if total <= 1e-12:
        raise DeliberationError(f"all action probabilities vanish for percept {percept}")
    return p / total


PEAK_OBSERVABLES = ("sum", "per-action")


def select_at_peak(series: np.ndarray, grid, strategy: str = "global-max",
                   observable: str = "sum") -> tuple[np.ndarray, float]:
    """Read action probabilities off per-action series of shape (n_actions, n_times).

    With ``observable="sum"`` one deliberation time is taken from the peak of
    the summed series. With ``"per-action"`` each action is read at its own
    peak; the returned time is then the earliest of those peaks.
    Returns the unnormalized probabilities and the deliberation time.
    """
    from .dynamics import first_peak_index

    if observable == "sum":
        n = first_peak_index(series.sum(axis=0), strategy)
        return series[:, n].copy(), float(grid.t_start + n * grid.dt)
    if observable == "per-action":
        idx = [first_peak_index(s, strategy) for s in series]
        probs = np.array([s[n] for s, n in zip(series, idx)])
        return probs, float(grid.t_start + min(idx) * grid.dt)
    raise ValueError(f"unknown peak observable {observable!r}; expected one of {PEAK_OBSERVABLES}")
