"""Experiment configuration, seeded ensembles, and CSV / SVG output."""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from .classical import ClassicalAgent, LearningParams
from .compressed import CompressedAgent
from .dynamics import PEAK_STRATEGIES
from .environment import InvasionGame, LearningCurve, curve_from_arrays, run_interacting_trial, run_trial
from .excitation import ExcitationAgent
from .numerics import TimeGrid

MODELS = ("classical", "qm1", "qm2")
INTERACTIONS = ("none", "mode1", "mode2")
EFFICIENCY_SOURCES = ("probability", "outcome")


class ConfigError(ValueError):
    pass


class EnsembleError(RuntimeError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    model: str = "classical"
    trials: int = 200
    agents: int = 100
    damping: float = 0.01
    reward: float = 1.0
    kappa: float = 0.0
    decay: float = 0.0
    t_max: float = 2 * math.pi
    grid_points: int = 401
    d: int = 2
    interaction: str = "none"
    seed: int = 0
    peak_strategy: str = "first-local-max"
    efficiency_source: str = "probability"

    def __post_init__(self):
        for key, msg in _validate(self):
            raise ConfigError(f"{key}: {msg}")

    def to_text(self) -> str:
        return "".join(f"{k} = {_format_value(v)}\n" for k, v in asdict(self).items())

    @property
    def grid(self) -> TimeGrid:
        return TimeGrid(0.0, self.t_max, self.grid_points)


def _format_value(v) -> str:
    return repr(v) if isinstance(v, float) else str(v)


def _validate(c: ExperimentConfig):
    choices = {"model": MODELS, "interaction": INTERACTIONS, "peak_strategy": PEAK_STRATEGIES,
               "efficiency_source": EFFICIENCY_SOURCES}
    for key, allowed in choices.items():
        if getattr(c, key) not in allowed:
            yield key, f"must be one of {', '.join(allowed)}, got {getattr(c, key)!r}"
    if c.trials < 1:
        yield "trials", f"must be >= 1, got {c.trials}"
    if c.agents < 1:
        yield "agents", f"must be >= 1, got {c.agents}"
    if not 0 <= c.damping <= 1:
        yield "damping", f"must lie in [0, 1], got {c.damping}"
    for key in ("reward", "kappa", "decay"):
        if getattr(c, key) < 0:
            yield key, f"must be >= 0, got {getattr(c, key)}"
    if not c.t_max > 0:
        yield "t_max", f"must be > 0, got {c.t_max}"
    if c.grid_points < 2:
        yield "grid_points", f"must be >= 2, got {c.grid_points}"
    if c.d < 2:
        yield "d", f"must be >= 2, got {c.d}"
    if not 0 <= c.seed < 2 ** 64:
        yield "seed", f"must be a 64-bit unsigned integer, got {c.seed}"


_FIELD_TYPES = {f.name: f.type for f in fields(ExperimentConfig)}


def _convert(key: str, raw: str):
    kind = _FIELD_TYPES[key]
    if kind == "int":
        return int(raw, 0)
    if kind == "float":
        return float(raw)
    return raw


def parse_config(text: str) -> ExperimentConfig:
    """Parse ``key = value`` lines; ``#`` starts a comment. Absent keys take defaults."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, raw = line.partition("=")
        key, raw = key.strip(), raw.strip()
        if not sep or not key or not raw:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        if key not in _FIELD_TYPES:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        try:
            values[key] = _convert(key, raw)
        except ValueError:
            raise ConfigError(f"line {lineno}: {key}: cannot parse {raw!r} as {_FIELD_TYPES[key]}") from None
    try:
        return ExperimentConfig(**values)
    except ConfigError as e:
        key = str(e).split(":", 1)[0]
        where = next((n for n, l in enumerate(text.splitlines(), 1) if l.split("=", 1)[0].strip() == key), None)
        raise ConfigError(f"line {where}: {e}" if where else str(e)) from None


def load_config(path) -> ExperimentConfig:
    return parse_config(Path(path).read_text(encoding="utf-8"))


def make_agent(config: ExperimentConfig):
    params = LearningParams(config.damping, config.reward)
    if config.model == "classical":
        return ClassicalAgent(config.d, params=params)
    if config.model == "qm1":
        return ExcitationAgent(config.d, params=params, kappa=config.kappa, decay=config.decay,
                               grid=config.grid, peak_strategy=config.peak_strategy)
    # qm2: kappa dephases the percept register, decay damps the action qubits
    return CompressedAgent(config.d, params=params, decay=config.decay, dephasing=config.kappa,
                           grid=config.grid, peak_strategy=config.peak_strategy)


def agent_rng(seed: int, index: int) -> np.random.Generator:
    """Independent stream for ensemble member ``index``, fixed by (seed, index) alone."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def run_member(config: ExperimentConfig, index: int):
    """Run one agent (or pair) and return efficiency and percept arrays per role."""
    rng = agent_rng(config.seed, index)
    game = InvasionGame(config.d)
    n_roles = 1 if config.interaction == "none" else 2
    values = np.zeros((n_roles, config.trials))
    percepts = np.zeros((n_roles, config.trials), dtype=np.int64)
    agents = [make_agent(config) for _ in range(n_roles)]
    outcome = config.efficiency_source == "outcome"
    mode = {"mode1": 1, "mode2": 2}.get(config.interaction)
    for t in range(config.trials):
        try:
            if mode is None:
                recs = (run_trial(agents[0], game, rng, t),)
            else:
                recs = run_interacting_trial(agents[0], agents[1], game, mode, rng, t)
        except Exception as e:
            raise EnsembleError(f"agent {index}, trial {t}: {e}") from e
        for r, rec in enumerate(recs):
            values[r, t] = float(rec.correct) if outcome else rec.correct_probability
            percepts[r, t] = rec.percept
    return values, percepts


def _run_chunk(args):
    config, indices = args
    return [run_member(config, i) for i in indices]


def run_ensemble(config: ExperimentConfig, workers: int = 1):
    """Run the configured ensemble and aggregate it into learning curves.

    Returns a LearningCurve, or a (first agent, second agent) pair of curves
    for interacting runs. Output depends only on the config, never on
    ``workers``.
    """
    indices = list(range(config.agents))
    if workers <= 1:
        members = [run_member(config, i) for i in indices]
    else:
        chunks = [indices[w::workers] for w in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_chunk, [(config, c) for c in chunks]))
        by_index = {}
        for chunk, res in zip(chunks, results):
            by_index.update(zip(chunk, res))
        members = [by_index[i] for i in indices]
    values = np.stack([m[0] for m in members])
    percepts = np.stack([m[1] for m in members])
    curves = tuple(curve_from_arrays(values[:, r], percepts[:, r], config.d) for r in range(values.shape[1]))
    return curves[0] if len(curves) == 1 else curves


def _fmt(x: float) -> str:
    return "nan" if np.isnan(x) else f"{x:.9f}"


def emit_csv(curve: LearningCurve, destination) -> Path:
    path = Path(destination)
    header = ["trial", "mean", "std"] + [f"p{i}_mean" for i in range(curve.n_percepts)]
    lines = [",".join(header)]
    for t in range(curve.trials):
        row = [str(t), _fmt(curve.mean[t]), _fmt(curve.std[t])] + [_fmt(x) for x in curve.percept_means[t]]
        lines.append(",".join(row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def read_csv(source) -> LearningCurve:
    lines = Path(source).read_text(encoding="utf-8").splitlines()
    header = lines[0].split(",")
    if header[:3] != ["trial", "mean", "std"]:
        raise ValueError(f"not a learning-curve CSV: header {header}")
    data = np.array([[float(x) for x in line.split(",")] for line in lines[1:]]).reshape(-1, len(header))
    return LearningCurve(data[:, 1], data[:, 2], data[:, 3:])


def emit_svg(curve: LearningCurve, destination, title: str = "") -> Path:
    """Line plot of the mean efficiency with a +-1 std band."""
    width, height, margin = 640, 400, 56
    pw, ph = width - 2 * margin, height - 2 * margin
    n = curve.trials
    xs = margin + (np.arange(n) / max(n - 1, 1)) * pw

    def y(v):
        return margin + (1 - np.clip(v, 0, 1)) * ph

    def pts(xv, yv):
        return " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(xv, yv))

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
    ]
    for level in (0.0, 0.25, 0.5, 0.75, 1.0):
        yy = y(level)
        parts.append(f'<line class="gridline" x1="{margin}" y1="{yy:.2f}" x2="{margin + pw}" y2="{yy:.2f}" '
                     f'stroke="#dddddd" stroke-width="1"/>')
        parts.append(f'<text x="{margin - 8}" y="{yy + 4:.2f}" font-size="11" text-anchor="end">{level:.2f}</text>')
    if np.any(curve.std > 0):
        upper, lower = y(curve.mean + curve.std), y(curve.mean - curve.std)
        parts.append(f'<polygon class="band" points="{pts(xs, upper)} {pts(xs[::-1], lower[::-1])}" '
                     f'fill="#1f77b4" fill-opacity="0.2" stroke="none"/>')
    parts.append(f'<polyline class="mean" points="{pts(xs, y(curve.mean))}" fill="none" '
                 f'stroke="#1f77b4" stroke-width="1.5"/>')
    parts.append(f'<rect x="{margin}" y="{margin}" width="{pw}" height="{ph}" fill="none" stroke="black"/>')
    parts.append(f'<text x="{margin + pw / 2}" y="{height - 14}" font-size="13" text-anchor="middle">trial</text>')
    parts.append(f'<text x="16" y="{margin + ph / 2}" font-size="13" text-anchor="middle" '
                 f'transform="rotate(-90 16 {margin + ph / 2})">learning efficiency</text>')
    parts.append(f'<text x="{margin}" y="{margin - 16}" font-size="11">0</text>')
    parts.append(f'<text x="{margin + pw}" y="{margin - 16}" font-size="11" text-anchor="end">{n - 1}</text>')
    if title:
        parts.append(f'<text x="{width / 2}" y="24" font-size="14" text-anchor="middle">{_escape(title)}</text>')
    parts.append("</svg>")
    path = Path(destination)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(parts) + "\n")
    return path


def _escape(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def write_outputs(config: ExperimentConfig, out_dir, workers: int = 1) -> list[Path]:
    """Run ``config`` and write curve CSV/SVG files plus the resolved config into ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    result = run_ensemble(config, workers)
    curves = (result,) if isinstance(result, LearningCurve) else result
    written = [out / "config.txt"]
    (out / "config.txt").write_text(config.to_text(), encoding="utf-8")
    for r, curve in enumerate(curves):
        stem = "curve" if r == 0 else f"curve_agent{r + 1}"
        written.append(emit_csv(curve, out / f"{stem}.csv"))
        written.append(emit_svg(curve, out / f"{stem}.svg", f"{config.model}, agent {r + 1}"))
    return written


def default_workers() -> int:
    return os.cpu_count() or 1
