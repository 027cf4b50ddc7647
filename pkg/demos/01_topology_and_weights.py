"""
Network topology and Metropolis weights
=======================================

Build a 20-node random geometric network, look at its neighborhoods and
the combination matrix every diffusion algorithm starts from.
"""

# %%
# A connected graph in the unit square; nodes closer than 0.35 are linked.
# The generator redraws the placement until the graph is connected.
import numpy as np

from difflink.topology import (generate_random_geometric, metropolis_weights,
                               neighbor_set, save_edge_list)

topo = generate_random_geometric(20, 0.35, np.random.SeedSequence(7))
print("edges:", len(topo.edges()))
print("neighborhood sizes (self included):", topo.degrees())

# %%
# Neighborhoods always contain the node itself and are sorted.
for k in (0, 6, 8):
    print(k, neighbor_set(topo, k))

# %%
# Metropolis weights: 1/max(n_k, n_l) on each link, the rest on the diagonal.
c = metropolis_weights(topo)
print("row sums:", np.round(c.sum(axis=1), 15))
print("symmetric:", np.array_equal(c, c.T))
print("row 6:", np.round(c[6, neighbor_set(topo, 6)], 3))

# %%
# The edge list is the format the harness reads back through
# ``topology.edge_list`` in a config.
save_edge_list(topo, "topology.txt")

# %%
# Optional picture of the graph.
try:
    import matplotlib.pyplot as plt
except ImportError:
    plt = None
if plt is not None:
    fig, ax = plt.subplots(figsize=(4, 4))
    p = topo.positions
    for k, l in topo.edges():
        ax.plot(*p[[k, l]].T, color="0.7", lw=0.8)
    ax.scatter(*p.T, zorder=2)
    for k, (x, y) in enumerate(p):
        ax.annotate(str(k), (x, y), textcoords="offset points", xytext=(3, 3))
    ax.set_aspect("equal")
    fig.savefig("topology.png", dpi=120)
