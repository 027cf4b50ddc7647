"""
Link selection around noisy nodes
=================================

Give every fourth node a measurement noise 20 dB above the rest and watch
how the two link-selection rules treat them.
"""

# %%
import sys

import numpy as np

from difflink.config import load_config
from difflink.harness import simulate
from difflink.topology import metropolis_weights

runs = int(sys.argv[1]) if len(sys.argv) > 1 else 40
noise = [1e-1 if k % 4 == 0 else 1e-3 for k in range(20)]
cfg = load_config(overrides=[f"runs={runs}", f"noise_var={noise}", "trace=true"])
result = simulate(cfg)
for name, db in result.steady_state().items():
    print(f"{name:5s} {db:7.2f} dB")

# %%
# How often does ESLS include a noisy neighbor, compared with a clean one?
# (run 0, second half of the run)
noisy = {k for k in range(20) if k % 4 == 0}
used = {"noisy": [], "clean": []}
topo = result.topology
for i, k, mask in result.esls_trace:
    if i < cfg.iterations // 2:
        continue
    for l in topo.neighbor_set(k):
        if l == k:
            continue
        used["noisy" if l in noisy else "clean"].append(mask >> int(l) & 1)
for kind, flags in used.items():
    print(f"ESLS uses a {kind} neighbor in {np.mean(flags):.0%} of selections")

# %%
# SILS: the average coefficient a node gives to noisy vs clean neighbors,
# relative to its Metropolis weight.
c = result.sils_trace
rows = np.array([(k, l, v) for i, k, l, v in c if i >= cfg.iterations // 2 and k != l])
w = metropolis_weights(topo)
ratio = rows[:, 2] / w[rows[:, 0].astype(int), rows[:, 1].astype(int)]
is_noisy = np.isin(rows[:, 1], list(noisy))
print(f"SILS weight / Metropolis weight: noisy {ratio[is_noisy].mean():.3f}, "
      f"clean {ratio[~is_noisy].mean():.3f}")
