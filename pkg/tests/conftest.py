import numpy as np
import pytest

from difflink.signals import SamplePath, generate_path, stack_paths


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def make_path(n_nodes=4, filter_len=3, iterations=50, runs=2, seed=11, **kw):
    kw.setdefault("noise_var", 1e-3)
    return stack_paths(generate_path(seed, r, n_nodes=n_nodes, filter_len=filter_len,
                                     iterations=iterations, **kw)
                       for r in range(runs))


def node_slice(path: SamplePath, k: int) -> SamplePath:
    """Single-node path carrying node ``k``'s data."""
    return SamplePath(path.inputs[:, k:k + 1].copy(),
                      path.measurements[:, :, k:k + 1].copy(),
                      path.truth.copy(), path.ar_coeffs[:, k:k + 1].copy())


def standalone_lms(path: SamplePath, mu):
    """Plain LMS on a single-node path, one run at a time."""
    runs, t, m = path.runs, path.iterations, path.filter_len
    out = np.empty((runs, t, m), dtype=complex)
    for r in range(runs):
        w = np.zeros(m, dtype=complex)
        for i in range(t):
            x = path.inputs[r, 0, i:i + m][::-1]
            e = path.measurements[r, i, 0] - np.sum(np.conj(w) * x)
            w = w + mu * x * np.conj(e)
            out[r, i] = w
    return out


ACCEPTANCE_LINES = []


def record(criterion, ok, detail):
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}")
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
