"""Exhaustive search-based link selection.

At every iteration each node scores every nonempty subset of its
neighborhood by the error its own measurement makes against the subset's
combined estimate, and keeps the subset with the smallest error magnitude.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .diffusion import WEIGHT_SUM_TOL, weighted_sum
from .signals import inner
from .topology import NetworkTopology, neighbor_set

DEFAULT_MAX_NEIGHBORHOOD = 12


class NeighborhoodTooLarge(ValueError):
    pass


@dataclass
class SubsetCandidate:
    members: tuple
    weights: np.ndarray
    error: complex = np.nan


def enumerate_subsets(neighbors, max_neighborhood=DEFAULT_MAX_NEIGHBORHOOD,
                      require=None) -> list[tuple]:
    """All nonempty subsets ordered by size, then lexicographically.

    ``require`` (a node id) keeps only subsets containing that node.
    """
    neighbors = tuple(int(v) for v in neighbors)
    if not neighbors:
        raise ValueError("neighborhood must not be empty")
    if len(neighbors) > max_neighborhood:
        raise NeighborhoodTooLarge(
            f"neighborhood of size {len(neighbors)} exceeds the cap of "
            f"{max_neighborhood} ({2 ** len(neighbors) - 1} subsets)"
        )
    ordered = sorted(neighbors)
    subsets = [s for size in range(1, len(ordered) + 1)
               for s in combinations(ordered, size)]
    if require is not None:
        subsets = [s for s in subsets if require in s]
    return subsets


def subset_weights(members, coeff_row, renormalize=True) -> np.ndarray:
    """Combination weights restricted to ``members``.

    ``coeff_row`` is indexed by node id (a row of the combination matrix).
    """
    w = np.asarray(coeff_row, dtype=float)[list(members)]
    if not renormalize:
        return w
    mass = w.sum()
    if mass <= 0:
        raise ValueError(f"subset {members} carries no combination weight")
    return w / mass


def subset_error(members, coeff_row, psis, x, d, renormalize=True) -> complex:
    """``d - (sum_l c_l psi_l)^H x`` over the subset.

    ``psis`` maps node id to that node's intermediate estimate (an (N, M)
    array works).
    """
    w = subset_weights(members, coeff_row, renormalize)
    est = weighted_sum(w, np.asarray([psis[l] for l in members]))
    return d - inner(est, x)


def select_best(candidates) -> SubsetCandidate:
    """Smallest ``|error|``; ties go to the earlier candidate, which under
    :func:`enumerate_subsets` ordering is the smaller, then
    lexicographically first, subset.
    """
    if not candidates:
        raise ValueError("no candidates to select from")
    mags = np.abs([c.error for c in candidates])
    return candidates[int(np.argmin(mags))]


def esls_combine(chosen: SubsetCandidate, psis) -> np.ndarray:
    return weighted_sum(chosen.weights,
                        np.asarray([psis[l] for l in chosen.members]))


def esls_node_update(k, topology, coeff_matrix, psis, x, d, *,
                     renormalize=True, require_self=False,
                     max_neighborhood=DEFAULT_MAX_NEIGHBORHOOD):
    """Reference single-node ESLS step; returns (new estimate, candidates,
    chosen candidate)."""
    subsets = enumerate_subsets(neighbor_set(topology, k), max_neighborhood,
                                k if require_self else None)
    row = coeff_matrix[k]
    candidates = []
    for s in subsets:
        w = subset_weights(s, row, renormalize)
        candidates.append(SubsetCandidate(
            s, w, subset_error(s, row, psis, x, d, renormalize)))
    chosen = select_best(candidates)
    return esls_combine(chosen, psis), candidates, chosen


def bitmask(members) -> int:
    return sum(1 << int(l) for l in members)


class ESLSCombiner:
    """Batched ESLS over all nodes.

    The subset table of node k is a (S, n_k) weight matrix ``W`` with one
    row per candidate, so the errors of all candidates for all runs are
    ``d - Y @ W.T`` where ``Y[r, l] = psi_l^H x_k``.

    ``trace`` (when enabled) collects ``(iteration, node, bitmask)`` for
    the first run of the batch.
    """

    name = "esls"

    def __init__(self, topology: NetworkTopology, weights: np.ndarray, *,
                 renormalize=True, require_self=False,
                 max_neighborhood=DEFAULT_MAX_NEIGHBORHOOD, trace=False):
        weights = np.asarray(weights, dtype=float)
        self.neighbors = []
        self.tables = []
        self.masks = []
        for k in range(topology.node_count):
            nb = neighbor_set(topology, k)
            subsets = enumerate_subsets(nb, max_neighborhood,
                                        k if require_self else None)
            pos = {int(l): j for j, l in enumerate(nb)}
            table = np.zeros((len(subsets), nb.size))
            for s_idx, s in enumerate(subsets):
                w = subset_weights(s, weights[k], renormalize)
                table[s_idx, [pos[l] for l in s]] = w
            if renormalize:
                excess = np.max(np.abs(table.sum(axis=1) - 1.0))
                assert excess <= WEIGHT_SUM_TOL, excess
            self.neighbors.append(nb)
            self.tables.append(table)
            self.masks.append(np.array([bitmask(s) for s in subsets],
                                       dtype=np.int64))
        self.trace_enabled = trace
        self.trace = []

    def reset(self, runs: int):
        self.trace = []

    def step(self, i, psi, x, d):
        omega = np.empty_like(psi)
        for k, nb in enumerate(self.neighbors):
            local = psi[:, nb]
            y = inner(local, x[:, k, None, :])
            errors = d[:, k, None] - y @ self.tables[k].T
            best = np.argmin(np.abs(errors), axis=1)
            omega[:, k] = weighted_sum(self.tables[k][best], local)
            if self.trace_enabled:
                self.trace.append((i, k, int(self.masks[k][best[0]])))
        return omega
