"""Sparsity-inspired link selection.

Each node measures how well every neighbor's intermediate estimate explains
its own sample, then moves a step ``delta = rho*eps / (1 + eps*|xi_min|)``
of combination weight away from the worst neighbor and onto the best one.
``xi_min`` is the smallest-magnitude neighbor error. The move comes from
the gradient of the reweighted l1 penalty ``sum_l log(1 + eps*|e_l|)``
applied to an error vector in which only the worst (positive) and best
(negative) entries are kept.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .diffusion import weighted_sum
from .signals import inner
from .topology import NetworkTopology, neighbor_set


@dataclass(frozen=True)
class SilsParams:
    rho: float
    epsilon: float

    def __post_init__(self):
        if self.rho < 0:
            raise ValueError(f"rho must be non-negative, got {self.rho}")
        if self.epsilon <= 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")

    def delta(self, xi_min):
        return self.rho * self.epsilon / (1.0 + self.epsilon * np.abs(xi_min))


@dataclass
class ErrorVector:
    raw: np.ndarray
    sparsified: np.ndarray
    xi_min: complex
    worst: int
    best: int


def sign(x):
    """``x/|x|`` for nonzero ``x`` (unit modulus for complex), else 0."""
    x = np.asarray(x)
    mag = np.abs(x)
    out = np.divide(x, mag, out=np.zeros_like(x), where=mag != 0)
    return out[()] if out.ndim == 0 else out


def neighbor_errors(psis, x, d) -> np.ndarray:
    """``d - psi_l^H x`` for every row ``psi_l`` of ``psis``."""
    psis = np.asarray(psis)
    x = np.asarray(x)
    if psis.shape[-1] != x.shape[-1]:
        raise ValueError(
            f"estimate length {psis.shape[-1]} does not match regressor "
            f"length {x.shape[-1]}"
        )
    return d - inner(psis, x)


def sparsify_errors(raw) -> ErrorVector:
    """Keep ``+|e|`` at the largest-magnitude entry and ``-|e|`` at the
    smallest; zero elsewhere. Ties resolve to the lowest index, so a
    constant vector (or a single entry) sparsifies to all zeros.
    """
    raw = np.asarray(raw)
    if raw.size == 0:
        raise ValueError("error vector is empty")
    mags = np.abs(raw)
    worst, best = int(np.argmax(mags)), int(np.argmin(mags))
    out = np.zeros(raw.shape, dtype=float)
    out[worst] += mags[worst]
    out[best] -= mags[best]
    return ErrorVector(raw, out, raw[best], worst, best)


def sils_combine(coeffs, psis, errors: ErrorVector, params: SilsParams):
    """Return ``(new estimate, adjusted coefficients)``.

    The worst neighbor loses ``delta`` and the best gains it, so the
    coefficient sum is unchanged. When worst and best coincide nothing moves.
    """
    adjusted = np.array(coeffs, dtype=float)
    if errors.worst != errors.best:
        delta = params.delta(errors.xi_min)
        adjusted[errors.worst] -= delta
        adjusted[errors.best] += delta
    return weighted_sum(adjusted, np.asarray(psis)), adjusted


class SILSCombiner:
    """Batched SILS over all nodes.

    With ``persist`` the adjusted coefficients carry over to the next
    iteration; otherwise every iteration restarts from the combination
    matrix. ``clamp`` floors coefficients at zero and offsets the added mass
    on the best neighbor's coefficient so the row still sums to one.

    Instrumentation: ``max_sum_error`` is the largest ``|sum(c) - 1|`` seen
    after any update, ``negative_count`` counts coefficients that went
    below zero. ``trace`` holds ``(iteration, node, neighbor, coefficient)``
    for the first run of the batch when enabled.
    """

    name = "sils"

    def __init__(self, topology: NetworkTopology, weights: np.ndarray,
                 params: SilsParams, *, persist=True, clamp=False, trace=False):
        weights = np.asarray(weights, dtype=float)
        self.params = params
        self.persist = persist
        self.clamp = clamp
        self.neighbors = [neighbor_set(topology, k)
                          for k in range(topology.node_count)]
        self.initial = [weights[k, nb] for k, nb in enumerate(self.neighbors)]
        self.trace_enabled = trace
        self.reset(1)

    def reset(self, runs: int):
        self.coeffs = [np.tile(c, (runs, 1)) for c in self.initial]
        self.max_sum_error = 0.0
        self.negative_count = 0
        self.trace = []

    def step(self, i, psi, x, d):
        omega = np.empty_like(psi)
        runs = psi.shape[0]
        rows = np.arange(runs)
        for k, nb in enumerate(self.neighbors):
            local = psi[:, nb]
            raw = d[:, k, None] - inner(local, x[:, k, None, :])
            mags = np.abs(raw)
            worst = np.argmax(mags, axis=1)
            best = np.argmin(mags, axis=1)
            delta = self.params.delta(raw[rows, best])
            delta = np.where(worst != best, delta, 0.0)

            c = self.coeffs[k] if self.persist else np.tile(self.initial[k], (runs, 1))
            c = c.copy()
            c[rows, worst] -= delta
            c[rows, best] += delta
            if self.clamp:
                clipped = np.minimum(c, 0.0).sum(axis=1)
                c = np.maximum(c, 0.0)
                c[rows, best] += clipped

            omega[:, k] = weighted_sum(c, local)

            self.negative_count += int(np.count_nonzero(c < 0))
            err = float(np.max(np.abs(c.sum(axis=1) - 1.0)))
            self.max_sum_error = max(self.max_sum_error, err)
            if self.persist:
                self.coeffs[k] = c
            if self.trace_enabled:
                self.trace.extend((i, k, int(l), float(v))
                                  for l, v in zip(nb, c[0]))
        return omega
