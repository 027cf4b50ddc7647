"""Input regressors, noisy measurements and the unknown parameter vector.

Every node sees an AR(1) input ``u(i) = a_k u(i-1) + w(i)`` whose driving
noise ``w`` has variance ``1 - a_k**2``, so the input power is one in
stationarity. Regressors are tapped delay lines over ``u``.

Random streams
--------------
All draws come from ``numpy.random.SeedSequence(seed, spawn_key=key)`` with
the keys below, so a run's sample path depends only on ``(seed, run)`` and
never on how runs are scheduled::

    (run, TRUTH)            initial parameter vector
    (run, MARKOV)           random-walk innovations of the parameter vector
    (run, AR)               per-node AR coefficients
    (run, INPUT, node)      driving noise of the node's input process
    (run, NOISE, node)      measurement noise of the node
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

TRUTH, MARKOV, AR, INPUT, NOISE = range(5)


def stream(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=key))


def _gaussian(rng, size, var, complex_valued):
    """Zero-mean Gaussian samples of variance ``var`` (circular if complex).

    One row of two normals per complex sample; real mode uses the first
    column only so both modes consume the same stream layout.
    """
    shape = (size, 2) if isinstance(size, int) else (*size, 2)
    g = rng.standard_normal(shape)
    if complex_valued:
        return np.sqrt(var / 2) * (g[..., 0] + 1j * g[..., 1])
    return np.sqrt(var) * g[..., 0] + 0j


def inner(a, b):
    """``a^H b`` along the last axis."""
    return np.sum(np.conj(a) * b, axis=-1)


class NodeSignalState:
    """Streaming input process of one node."""

    def __init__(self, ar_coeff: float, filter_len: int, noise_std: float = 0.0,
                 complex_valued: bool = True):
        if not 0.0 <= ar_coeff < 1.0:
            raise ValueError(f"ar_coeff must lie in [0, 1), got {ar_coeff}")
        self.ar_coeff = float(ar_coeff)
        self.noise_std = float(noise_std)
        self.complex_valued = complex_valued
        self.last_input = 0j
        self.regressor_window = deque([0j] * filter_len, maxlen=filter_len)

    def input_step(self, rng) -> complex:
        w = _gaussian(rng, 1, 1.0 - self.ar_coeff**2, self.complex_valued)[0]
        u = w + self.ar_coeff * self.last_input
        self.last_input = u
        self.regressor_window.appendleft(u)
        return u

    def regressor(self) -> np.ndarray:
        return np.array(self.regressor_window, dtype=complex)


@dataclass
class GroundTruth:
    omega0: np.ndarray
    mode: str = "static"
    markov_std: float = 0.0
    complex_valued: bool = True

    def __post_init__(self):
        if self.mode not in ("static", "markov"):
            raise ValueError(f"unknown truth mode {self.mode!r}")
        self.omega0 = np.asarray(self.omega0, dtype=complex)

    @classmethod
    def random(cls, filter_len: int, rng, mode="static", markov_std=0.0,
               complex_valued=True) -> "GroundTruth":
        """Gaussian draw normalized to unit norm."""
        w = _gaussian(rng, filter_len, 1.0, complex_valued)
        return cls(w / np.linalg.norm(w), mode, markov_std, complex_valued)


def evolve_truth(truth: GroundTruth, rng) -> GroundTruth:
    """One random-walk step ``w0 <- w0 + z``; static truth is returned as is."""
    if truth.mode == "static":
        return truth
    z = _gaussian(rng, truth.omega0.shape[0], truth.markov_std**2,
                  truth.complex_valued)
    return GroundTruth(truth.omega0 + z, truth.mode, truth.markov_std,
                       truth.complex_valued)


def measure(truth: GroundTruth, x, noise_std: float, rng,
            complex_valued: bool = True) -> complex:
    """Return ``w0^H x + n`` with ``n`` of variance ``noise_std**2``."""
    x = np.asarray(x)
    if x.shape != truth.omega0.shape:
        raise ValueError(
            f"regressor length {x.shape} does not match parameter length "
            f"{truth.omega0.shape}"
        )
    n = _gaussian(rng, 1, noise_std**2, complex_valued)[0]
    return inner(truth.omega0, x) + n


@dataclass
class SamplePath:
    """Pre-drawn data for a batch of runs.

    Shapes: ``inputs`` (R, N, T + M - 1) with M - 1 leading zeros,
    ``measurements`` (R, T, N), ``truth`` (R, T, M) holding the parameter
    vector in force at each iteration, ``ar_coeffs`` (R, N).
    """

    inputs: np.ndarray
    measurements: np.ndarray
    truth: np.ndarray
    ar_coeffs: np.ndarray

    @property
    def runs(self) -> int:
        return self.measurements.shape[0]

    @property
    def iterations(self) -> int:
        return self.measurements.shape[1]

    @property
    def node_count(self) -> int:
        return self.measurements.shape[2]

    @property
    def filter_len(self) -> int:
        return self.truth.shape[2]

    def regressors(self, i: int) -> np.ndarray:
        """Regressors of all nodes at iteration ``i``, shape (R, N, M)."""
        return self.inputs[:, :, i:i + self.filter_len][:, :, ::-1]


def generate_path(seed: int, run: int, *, n_nodes: int, filter_len: int,
                  iterations: int, noise_var, ar_range=(0.0, 0.5),
                  mode="static", markov_std=0.0,
                  complex_valued=True) -> SamplePath:
    """Sample path of a single run (leading batch axis of length one)."""
    m, t = filter_len, iterations
    noise_var = np.broadcast_to(np.asarray(noise_var, dtype=float), (n_nodes,))

    truth = GroundTruth.random(m, stream(seed, run, TRUTH), mode, markov_std,
                               complex_valued)
    truth_path = np.empty((t, m), dtype=complex)
    walk = stream(seed, run, MARKOV)
    for i in range(t):
        truth_path[i] = truth.omega0
        truth = evolve_truth(truth, walk)

    lo, hi = ar_range
    a = stream(seed, run, AR).uniform(lo, hi, size=n_nodes)

    drive = np.stack([
        _gaussian(stream(seed, run, INPUT, k), t, 1.0 - a[k] ** 2, complex_valued)
        for k in range(n_nodes)
    ])
    u = np.zeros((n_nodes, t + m - 1), dtype=complex)
    prev = np.zeros(n_nodes, dtype=complex)
    for i in range(t):
        prev = drive[:, i] + a * prev
        u[:, i + m - 1] = prev

    noise = np.stack([
        _gaussian(stream(seed, run, NOISE, k), t, noise_var[k], complex_valued)
        for k in range(n_nodes)
    ])

    path = SamplePath(u[None], np.empty((1, t, n_nodes), dtype=complex),
                      truth_path[None], a[None])
    for i in range(t):
        x = path.regressors(i)[0]
        path.measurements[0, i] = inner(truth_path[i], x) + noise[:, i]
    return path


def stack_paths(paths) -> SamplePath:
    paths = list(paths)
    return SamplePath(
        np.concatenate([p.inputs for p in paths]),
        np.concatenate([p.measurements for p in paths]),
        np.concatenate([p.truth for p in paths]),
        np.concatenate([p.ar_coeffs for p in paths]),
    )
