"""Classical projective simulation: a random walk on a weighted clip graph."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .agent import Deliberation, sample_index

H_MIN = 1.0


class Clip(NamedTuple):
    kind: str  # "p" (percept) or "a" (action)
    index: int

    def __str__(self):
        return f"{self.kind}{self.index}"

    @property
    def is_action(self) -> bool:
        return self.kind == "a"

    @classmethod
    def parse(cls, text: str) -> "Clip":
        text = text.strip()
        if len(text) < 2 or text[0] not in "pa" or not text[1:].isdigit():
            raise ValueError(f"bad clip label {text!r}; expected p<i> or a<k>")
        return cls(text[0], int(text[1:]))


def percept(i: int) -> Clip:
    return Clip("p", i)


def action(k: int) -> Clip:
    return Clip("a", k)


@dataclass(frozen=True)
class LearningParams:
    damping: float = 0.0
    reward: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.damping <= 1.0:
            raise ValueError(f"damping must lie in [0, 1], got {self.damping}")
        if self.reward < 0:
            raise ValueError(f"reward must be >= 0, got {self.reward}")


@dataclass(frozen=True)
class WeightedClipGraph:
    """Directed clip graph with edge weights ``h``.

    Treat instances as immutable: ``update_weights`` returns a new graph.
    """

    clips: tuple[Clip, ...]
    weights: dict[tuple[Clip, Clip], float]
    _out: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        known = set(self.clips)
        for (a, b), h in self.weights.items():
            if a not in known or b not in known:
                raise ValueError(f"edge {a}->{b} references an unknown clip")
            if h < H_MIN - 1e-12:
                raise ValueError(f"weight {h} on {a}->{b} is below {H_MIN}")
        if self._out is None:
            out = {c: [] for c in self.clips}
            for a, b in self.weights:
                out[a].append(b)
            object.__setattr__(self, "_out", {c: tuple(v) for c, v in out.items()})

    def successors(self, clip: Clip) -> tuple[Clip, ...]:
        return self._out[clip]

    def with_weights(self, weights) -> "WeightedClipGraph":
        return WeightedClipGraph(self.clips, weights, self._out)

    def to_text(self) -> str:
        return "".join(f"{a} {b} {h!r}\n" for (a, b), h in self.weights.items())

    @classmethod
    def from_text(cls, text: str) -> "WeightedClipGraph":
        weights = {}
        clips = []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.replace(",", " ").split()
            if len(parts) != 3:
                raise ValueError(f"line {lineno}: expected 'from to weight', got {line!r}")
            a, b = Clip.parse(parts[0]), Clip.parse(parts[1])
            weights[(a, b)] = float(parts[2])
            for c in (a, b):
                if c not in clips:
                    clips.append(c)
        return cls(tuple(sorted(clips)), weights)


def invasion_graph(n_percepts: int = 2, n_actions: int | None = None, h0: float = 1.0) -> WeightedClipGraph:
    """Every percept linked to every action, no percept-percept or action-action edges."""
    n_actions = n_percepts if n_actions is None else n_actions
    ps = [percept(i) for i in range(n_percepts)]
    acts = [action(k) for k in range(n_actions)]
    return WeightedClipGraph(tuple(ps + acts), {(p, a): float(h0) for p in ps for a in acts})


def hop_probabilities(g: WeightedClipGraph, start: Clip) -> dict[Clip, float]:
    succ = g.successors(start)
    if not succ:
        raise ValueError(f"clip {start} has no outgoing edges")
    w = [g.weights[(start, c)] for c in succ]
    total = sum(w)
    return {c: x / total for c, x in zip(succ, w)}


def walk(g: WeightedClipGraph, start: Clip, rng: np.random.Generator, max_hops: int = 10_000):
    """Hop from ``start`` until an action clip absorbs the walk.

    Returns the action clip and the traversed edges.
    """
    if start.is_action:
        raise ValueError("a walk must start on a percept clip")
    path = []
    here = start
    for _ in range(max_hops):
        probs = hop_probabilities(g, here)
        clips = list(probs)
        nxt = clips[sample_index(np.fromiter(probs.values(), float, len(clips)), rng)]
        path.append((here, nxt))
        here = nxt
        if here.is_action:
            return here, tuple(path)
    raise RuntimeError(f"walk from {start} not absorbed after {max_hops} hops")


def update_weights(g: WeightedClipGraph, traversed, rewarded: bool, params: LearningParams) -> WeightedClipGraph:
    gamma = params.damping
    new = {e: h - gamma * (h - 1.0) for e, h in g.weights.items()}
    if rewarded and params.reward:
        for e in traversed:
            new[e] += params.reward
    return g.with_weights(new)


class ClassicalAgent:
    """Projective-simulation agent on the invasion-game graph."""

    kind = "classical"

    def __init__(self, n_percepts: int = 2, n_actions: int | None = None,
                 params: LearningParams = LearningParams(), h0: float = 1.0,
                 graph: WeightedClipGraph | None = None):
        self.n_percepts = n_percepts
        self.n_actions = n_percepts if n_actions is None else n_actions
        self.params = params
        self.graph = graph if graph is not None else invasion_graph(n_percepts, self.n_actions, h0)

    def action_probabilities(self, p: int) -> np.ndarray:
        probs = hop_probabilities(self.graph, percept(p))
        return np.array([probs.get(action(k), 0.0) for k in range(self.n_actions)])

    def deliberate(self, p: int, rng: np.random.Generator) -> Deliberation:
        act, path = walk(self.graph, percept(p), rng)
        return Deliberation(p, act.index, self.action_probabilities(p), None, path)

    def learn(self, d: Deliberation, rewarded: bool) -> None:
        self.graph = update_weights(self.graph, d.path, rewarded, self.params)
