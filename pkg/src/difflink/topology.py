"""Network graphs and Metropolis combination weights."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


class TopologyError(ValueError):
    pass


@dataclass(frozen=True)
class NetworkTopology:
    """Undirected graph over ``node_count`` nodes.

    ``adjacency`` is a symmetric boolean matrix with a False diagonal; every
    node is implicitly its own neighbor. ``positions`` holds unit-square
    coordinates when the graph was generated geometrically.
    """

    adjacency: np.ndarray
    positions: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        adj = np.asarray(self.adjacency, dtype=bool)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise TopologyError(f"adjacency must be square, got shape {adj.shape}")
        if not np.array_equal(adj, adj.T):
            raise TopologyError("adjacency must be symmetric")
        if adj.diagonal().any():
            raise TopologyError("self-links must not be stored")
        adj = adj.copy()
        adj.flags.writeable = False
        object.__setattr__(self, "adjacency", adj)

    def __eq__(self, other):
        if not isinstance(other, NetworkTopology):
            return NotImplemented
        return np.array_equal(self.adjacency, other.adjacency)

    __hash__ = None

    @property
    def node_count(self) -> int:
        return self.adjacency.shape[0]

    def neighbor_set(self, k: int) -> np.ndarray:
        return neighbor_set(self, k)

    def degrees(self) -> np.ndarray:
        """Neighborhood sizes n_k, counting the node itself."""
        return self.adjacency.sum(axis=1) + 1

    def edges(self) -> list[tuple[int, int]]:
        k, l = np.nonzero(np.triu(self.adjacency))
        return [(int(a), int(b)) for a, b in zip(k, l)]

    def is_connected(self) -> bool:
        n = self.node_count
        seen = np.zeros(n, dtype=bool)
        seen[0] = True
        frontier = [0]
        while frontier:
            k = frontier.pop()
            new = self.adjacency[k] & ~seen
            seen |= new
            frontier.extend(np.flatnonzero(new).tolist())
        return bool(seen.all())

    @classmethod
    def from_edges(cls, n: int, edges) -> "NetworkTopology":
        adj = np.zeros((n, n), dtype=bool)
        for k, l in edges:
            if not (0 <= k < n and 0 <= l < n):
                raise TopologyError(f"edge ({k}, {l}) out of range for {n} nodes")
            if k == l:
                raise TopologyError(f"self-loop on node {k}")
            adj[k, l] = adj[l, k] = True
        return cls(adj)

    @classmethod
    def empty(cls, n: int) -> "NetworkTopology":
        return cls(np.zeros((n, n), dtype=bool))

    @classmethod
    def complete(cls, n: int) -> "NetworkTopology":
        return cls(~np.eye(n, dtype=bool))

    @classmethod
    def chain(cls, n: int) -> "NetworkTopology":
        return cls.from_edges(n, [(k, k + 1) for k in range(n - 1)])


def neighbor_set(topology: NetworkTopology, k: int) -> np.ndarray:
    """Return ``{k} ∪ {l : linked(k, l)}`` in ascending order."""
    n = topology.node_count
    if not 0 <= k < n:
        raise IndexError(f"node index {k} out of range for {n} nodes")
    row = topology.adjacency[k].copy()
    row[k] = True
    return np.flatnonzero(row)


def generate_random_geometric(
    n: int, radius: float, seed, max_attempts: int = 1000
) -> NetworkTopology:
    """Place ``n`` nodes uniformly in the unit square and link pairs within
    ``radius``; redraw the placement until the graph is connected.
    """
    if n < 1:
        raise TopologyError(f"need at least one node, got {n}")
    if not 0 < radius <= np.sqrt(2):
        raise TopologyError(f"radius must lie in (0, sqrt(2)], got {radius}")
    rng = np.random.default_rng(seed)
    for _ in range(max_attempts):
        pos = rng.uniform(0.0, 1.0, size=(n, 2))
        diff = pos[:, None, :] - pos[None, :, :]
        dist = np.sqrt((diff**2).sum(axis=-1))
        adj = dist <= radius
        np.fill_diagonal(adj, False)
        topo = NetworkTopology(adj, positions=pos)
        if topo.is_connected():
            return topo
    raise TopologyError(
        f"no connected graph found in {max_attempts} attempts; "
        f"radius {radius} is likely too small for {n} nodes"
    )


def metropolis_weights(topology: NetworkTopology) -> np.ndarray:
    """Metropolis combination matrix, c_kl = 1/max(n_k, n_l) on links.

    n_k counts node k itself. The diagonal absorbs the remainder so every
    row sums to one.
    """
    adj = topology.adjacency
    deg = topology.degrees()
    c = np.where(adj, 1.0 / np.maximum(deg[:, None], deg[None, :]), 0.0)
    np.fill_diagonal(c, 0.0)
    np.fill_diagonal(c, 1.0 - c.sum(axis=1))
    return c


def save_edge_list(topology: NetworkTopology, path) -> None:
    """Write ``k l`` pairs (k < l, ascending). The first line records the
    node count as ``# nodes N`` so isolated nodes survive a round trip.
    """
    lines = [f"# nodes {topology.node_count}"]
    lines += [f"{k} {l}" for k, l in topology.edges()]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_edge_list(path, n: int | None = None) -> NetworkTopology:
    edges = []
    declared = None
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split()
            if len(parts) == 2 and parts[0] == "nodes":
                declared = int(parts[1])
            continue
        k, l = (int(t) for t in line.split())
        edges.append((k, l))
    if n is None:
        n = declared
    if n is None:
        n = 1 + max((max(e) for e in edges), default=0)
    return NetworkTopology.from_edges(n, edges)
