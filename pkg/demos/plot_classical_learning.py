"""
Classical agent on the invasion game
====================================

Without forgetting (damping 0) the classical agent's weights form a Polya
urn per symbol, so the expected efficiency can be computed exactly. The
simulated ensemble sits on top of it.
"""

import matplotlib.pyplot as plt
import numpy as np
from scipy.stats import binom

from qpsim.harness import ExperimentConfig, emit_csv, emit_svg, run_ensemble

cfg = ExperimentConfig(model="classical", agents=500, trials=300, damping=0.0, reward=1.0, seed=1)
curve = run_ensemble(cfg)

# exact expectation: after k rewards the correct action has weight 1 + k against 1
dist, per_visit = np.array([1.0]), []
for n in range(cfg.trials):
    k = np.arange(dist.size)
    q = (k + 1) / (k + 2)
    per_visit.append(dist @ q)
    dist = np.concatenate((dist * (1 - q), [0])) + np.concatenate(([0], dist * q))
exact = [binom.pmf(np.arange(cfg.trials), t, 0.5) @ per_visit for t in range(cfg.trials)]

plt.plot(curve.mean, label=f"simulated, {cfg.agents} agents")
plt.fill_between(np.arange(cfg.trials), curve.mean - curve.std, curve.mean + curve.std, alpha=0.2)
plt.plot(exact, "k--", label="exact expectation")
plt.xlabel("trial")
plt.ylabel("learning efficiency")
plt.legend()
plt.savefig("classical_learning.png", dpi=120)

# the package's own figure and CSV output
emit_csv(curve, "classical_learning.csv")
emit_svg(curve, "classical_learning.svg", "classical, damping 0")
print("final efficiency", curve.mean[-1], "exact", exact[-1])
