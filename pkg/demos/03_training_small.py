"""
Training the greedy builder with double deep Q-learning
=======================================================

Each training round plays one episode on a freshly generated instance:
the network scores every frontier vertex, an epsilon-greedy policy picks
one, and the transition lands in a replay buffer.  After a warmup the
trainer takes one SGD step per environment step, with a frozen target
copy refreshed every 100 updates supplying the bootstrap values.

A small network on small instances is enough to see the effect; the
defaults reported for the full setup are p_dim=64 over 6000 rounds.
"""

import itertools
from dataclasses import replace

import numpy as np

from steinerkit import (
    DdqnConfig,
    GeneratorConfig,
    generate,
    greedy_rollout,
    init_params,
    kmb,
    train,
)

base = GeneratorConfig(model="rr", n=16, terminal_ratio=0.25,
                       weight_range=(1.0, 5.0), seed=0)
SEED = 3

# Infinite instance stream for training, a held-out set for scoring.
stream = (generate(replace(base, seed=SEED + i)) for i in itertools.count())
held_out = [generate(replace(base, seed=SEED + 10_000 + i)) for i in range(40)]

config = DdqnConfig(p_dim=8, k=2, rounds=600, batch=16, lr=1e-3,
                    gamma=0.2, warmup_batches=4, target_sync=100,
                    seed=SEED, validation_every=100)
params, curve = train(stream, config,
                      validation_instances=held_out[:10])

print("learning curve (every 100 rounds):")
for row in curve[::100]:
    print(f"  round {row.round:4d}  episode cost {row.episode_cost:6.1f}  "
          f"epsilon {row.epsilon:.3f}")

# Gain = rollout cost / classic cost, averaged over held-out instances.
# The untrained network is the same architecture at its random init.
untrained = init_params(config.p_dim, config.k, seed=SEED)
classic = [kmb(inst).cost for inst in held_out]
for label, p in (("untrained", untrained), ("trained", params)):
    gains = [greedy_rollout(inst, p).cost / c
             for inst, c in zip(held_out, classic)]
    print(f"{label:>9}: mean gain {np.mean(gains):.4f} over {len(held_out)} instances")
