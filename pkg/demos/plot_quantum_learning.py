"""
Quantum agents learn, and dissipation slows them
================================================

Both quantum models trained with the classical update rule on their
couplings. The ensemble spread is large early, when agents have learned one
symbol but not yet the other, and collapses once both are known. Adding
incoherent hopping (kappa) to Model 1 lowers and delays the curve.
"""

import matplotlib.pyplot as plt

from qpsim.harness import ExperimentConfig, run_ensemble

fig, (left, right) = plt.subplots(1, 2, figsize=(11, 4))

for model in ("qm1", "qm2"):
    curve = run_ensemble(ExperimentConfig(model=model, agents=50, trials=150, damping=0.01, seed=2))
    left.plot(curve.mean, label=model)
    left.fill_between(range(curve.trials), curve.mean - curve.std, curve.mean + curve.std, alpha=0.2)
    print(model, "std over trials 1-50:", curve.std[1:51].mean(), "last 50:", curve.std[-50:].mean())
left.set_xlabel("trial")
left.set_ylabel("learning efficiency")
left.legend()

for kappa in (0.0, 0.05, 0.2):
    curve = run_ensemble(ExperimentConfig(model="qm1", agents=30, trials=100, damping=0.01, kappa=kappa, seed=3))
    right.plot(curve.mean, label=f"kappa = {kappa}")
right.set_xlabel("trial")
right.set_title("Model 1 with incoherent hopping")
right.legend()

fig.tight_layout()
fig.savefig("quantum_learning.png", dpi=120)
print("wrote quantum_learning.png")
