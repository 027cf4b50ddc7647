"""Adapt-then-combine diffusion LMS.

The network engine keeps a leading run axis on every array so a batch of
independent Monte Carlo runs advances together. Each iteration has two
phases: every node adapts on its own data, then every node combines the
frozen phase-one estimates of its neighbors. Combination rules are small
objects with a ``step(i, psi, x, d)`` method returning the new estimates;
ATC lives here, the link-selection rules in :mod:`difflink.esls` and
:mod:`difflink.sils`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .signals import SamplePath, inner
from .topology import NetworkTopology, neighbor_set

WEIGHT_SUM_TOL = 1e-12


class WeightSumError(ValueError):
    pass


@dataclass
class NodeState:
    omega: np.ndarray
    step_size: float
    coeff_row: np.ndarray | None = None
    psi: np.ndarray = field(default=None)

    def __post_init__(self):
        self.omega = np.asarray(self.omega, dtype=complex)
        if self.psi is None:
            self.psi = self.omega.copy()
        if self.step_size <= 0:
            raise ValueError(f"step size must be positive, got {self.step_size}")

    @classmethod
    def zeros(cls, filter_len, step_size, coeff_row=None):
        return cls(np.zeros(filter_len, dtype=complex), step_size, coeff_row)


def lms_adapt(omega, x, d, mu):
    """``omega + mu * x * conj(d - omega^H x)``, broadcasting over batches."""
    e = d - inner(omega, x)
    return omega + mu * x * np.conj(e)[..., None]


def adapt(state: NodeState, x, d) -> np.ndarray:
    x = np.asarray(x)
    if x.shape != state.omega.shape:
        raise ValueError(
            f"regressor shape {x.shape} does not match estimate {state.omega.shape}"
        )
    state.psi = lms_adapt(state.omega, x, d, state.step_size)
    return state.psi


def weighted_sum(weights, psis):
    """``sum_l weights[..., l] * psis[..., l, :]``.

    Every combination rule goes through this one reduction so that equal
    weights give bit-identical estimates across rules.
    """
    return (weights[..., None] * psis).sum(axis=-2)


def combine(psis, coeffs, tol=WEIGHT_SUM_TOL) -> np.ndarray:
    psis = np.asarray(psis)
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.shape[-1] != psis.shape[-2]:
        raise ValueError(
            f"{coeffs.shape[-1]} weights for {psis.shape[-2]} estimates"
        )
    excess = np.max(np.abs(coeffs.sum(axis=-1) - 1.0))
    if excess > tol:
        raise WeightSumError(f"combination weights sum off by {excess:.3e}")
    return weighted_sum(coeffs, psis)


class ATCCombiner:
    """Fixed combination weights taken from a combination matrix."""

    name = "atc"

    def __init__(self, topology: NetworkTopology, weights: np.ndarray):
        self.neighbors = [neighbor_set(topology, k)
                          for k in range(topology.node_count)]
        self.rows = [np.asarray(weights, dtype=float)[k, nb]
                     for k, nb in enumerate(self.neighbors)]

    def reset(self, runs: int):
        pass

    def step(self, i, psi, x, d):
        omega = np.empty_like(psi)
        runs = psi.shape[0]
        for k, nb in enumerate(self.neighbors):
            w = np.broadcast_to(self.rows[k], (runs, nb.size))
            omega[:, k] = weighted_sum(w, psi[:, nb])
        return omega


def atc_iteration(omega, x, d, mu, combiner):
    """One synchronous network iteration.

    ``omega`` (R, N, M) holds the previous estimates; the returned pair is
    the new estimates and the intermediate ``psi`` they were built from.
    """
    mu = np.asarray(mu, dtype=float)
    if mu.ndim == 1:
        mu = mu[:, None]
    psi = lms_adapt(omega, x, d, mu)
    psi.flags.writeable = False
    return combiner.step(None, psi, x, d), psi


@dataclass
class NetworkRun:
    """Per-run, per-iteration, per-node squared errors, shape (R, T, N).

    ``apriori_sq`` is ``|(w0(i) - w_k(i-1))^H x_k(i)|**2``; ``msd`` is
    ``||w0(i) - w_k(i)||**2``. ``final_omega`` is (R, N, M).
    """

    apriori_sq: np.ndarray
    msd: np.ndarray
    final_omega: np.ndarray


def run_network(path: SamplePath, combiner, step_size) -> NetworkRun:
    runs, t, n, m = path.runs, path.iterations, path.node_count, path.filter_len
    mu = np.broadcast_to(np.asarray(step_size, dtype=float), (n,))
    combiner.reset(runs)
    omega = np.zeros((runs, n, m), dtype=complex)
    apriori = np.empty((runs, t, n))
    msd = np.empty((runs, t, n))
    for i in range(t):
        x = path.regressors(i)
        d = path.measurements[:, i]
        w0 = path.truth[:, i, None, :]
        apriori[:, i] = np.abs(inner(w0 - omega, x)) ** 2
        psi = lms_adapt(omega, x, d, mu[:, None])
        psi.flags.writeable = False
        omega = combiner.step(i, psi, x, d)
        msd[:, i] = np.sum(np.abs(w0 - omega) ** 2, axis=-1)
    return NetworkRun(apriori, msd, omega)
