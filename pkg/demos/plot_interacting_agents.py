"""
Interacting agents
==================

In mode 2 both agents see the same symbol, but the second one is rewarded
only for copying the first. With forgetting switched on, the classical
follower inherits its leader's mistakes and settles lower; the Model 1
follower ends up about as good as its leader.
"""

import matplotlib.pyplot as plt

from qpsim.harness import ExperimentConfig, run_ensemble

fig, axes = plt.subplots(1, 2, figsize=(11, 4), sharey=True)
for ax, (model, agents) in zip(axes, [("classical", 500), ("qm1", 30)]):
    leader, follower = run_ensemble(ExperimentConfig(model=model, agents=agents, trials=200, damping=0.1,
                                                     interaction="mode2", seed=4))
    ax.plot(leader.mean, label="agent 1 (judged by the game)")
    ax.plot(follower.mean, label="agent 2 (copies agent 1)")
    ax.set_title(f"{model}, {agents} pairs")
    ax.set_xlabel("trial")
    print(f"{model}: final agent 1 {leader.mean[-1]:.3f}, agent 2 {follower.mean[-1]:.3f}")
axes[0].set_ylabel("learning efficiency")
axes[0].legend()
fig.tight_layout()
fig.savefig("interacting_agents.png", dpi=120)
