"""
Deliberation as a quantum walk
==============================

A quantum agent does not hop from clip to clip. Its percept excitation
spreads coherently, and the action is read off at the first peak of the
total action probability. This script shows that window for both quantum
models, before and after the correct coupling has been strengthened.
"""

import matplotlib.pyplot as plt
import numpy as np

from qpsim.agent import select_at_peak
from qpsim.classical import action, percept
from qpsim.compressed import CompressedAgent, DriveCouplings
from qpsim.excitation import CouplingSpec, ExcitationAgent

# Model 1: four clips p0, p1, a0, a1, every percept coupled to every action.
# Strengthening p0-a0 tilts the walk from p0 toward a0.
fig, axes = plt.subplots(2, 2, figsize=(10, 6), sharex=True, sharey=True)
for col, lam00 in enumerate([1.0, 4.0]):
    spec = CouplingSpec(lam={(percept(0), action(0)): lam00, (percept(0), action(1)): 1.0,
                             (percept(1), action(0)): 1.0, (percept(1), action(1)): 1.0})
    agent = ExcitationAgent(2, spec=spec)
    series = agent.action_series(0)
    probs, t_star = select_at_peak(series, agent.grid, agent.peak_strategy)
    ax = axes[0, col]
    ax.plot(agent.grid.times, series[0], label="a0 (correct)")
    ax.plot(agent.grid.times, series[1], label="a1")
    ax.axvline(t_star, color="k", ls=":")
    ax.set_title(f"Model 1, lambda(p0,a0) = {lam00}: P(a0) = {probs[0] / probs.sum():.3f}")
    ax.legend(loc="upper right")

# Model 2: one percept qubit conditions the drive on two action qubits.
for col, lam00 in enumerate([1.0, 4.0]):
    agent = CompressedAgent(2, couplings=DriveCouplings([[lam00, 1.0], [1.0, 1.0]]))
    series = agent.action_series(0)
    probs, t_star = select_at_peak(series, agent.grid, agent.peak_strategy)
    ax = axes[1, col]
    ax.plot(agent.grid.times, series[0], label="a0 (correct)")
    ax.plot(agent.grid.times, series[1], label="a1")
    ax.axvline(t_star, color="k", ls=":")
    ax.set_title(f"Model 2, lambda(p0,a0) = {lam00}: P(a0) = {probs[0] / probs.sum():.3f}")
    ax.set_xlabel("t")

for ax in axes[:, 0]:
    ax.set_ylabel("action probability")
fig.tight_layout()
fig.savefig("deliberation.png", dpi=120)
print("wrote deliberation.png")
