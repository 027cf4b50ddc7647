"""EMSE and MSD learning curves."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .signals import inner

DB_FLOOR = -200.0


def apriori_error(truth, omega_prev, x) -> float:
    """Noise-free a-priori error power ``|(w0 - w_prev)^H x|**2``."""
    truth, omega_prev, x = (np.asarray(a) for a in (truth, omega_prev, x))
    if not truth.shape == omega_prev.shape == x.shape:
        raise ValueError(
            f"shape mismatch: truth {truth.shape}, estimate {omega_prev.shape}, "
            f"regressor {x.shape}"
        )
    return np.abs(inner(truth - omega_prev, x)) ** 2


def to_db(power):
    power = np.asarray(power, dtype=float)
    with np.errstate(divide="ignore"):
        db = 10.0 * np.log10(power)
    return np.maximum(db, DB_FLOOR)


@dataclass
class LearningCurve:
    algorithm: str
    emse_db: np.ndarray
    msd_db: np.ndarray

    def __len__(self):
        return len(self.emse_db)


def aggregate(apriori_sq, msd, algorithm="") -> LearningCurve:
    """Average (runs, iterations, nodes) records over runs and nodes."""
    apriori_sq = np.asarray(apriori_sq, dtype=float)
    msd = np.asarray(msd, dtype=float)
    if apriori_sq.ndim != 3 or apriori_sq.shape != msd.shape:
        raise ValueError(
            f"expected matching (runs, iterations, nodes) arrays, got "
            f"{apriori_sq.shape} and {msd.shape}"
        )
    if np.isnan(apriori_sq).any() or np.isnan(msd).any():
        raise ValueError("records contain missing (NaN) cells")
    return LearningCurve(algorithm,
                         to_db(apriori_sq.mean(axis=(0, 2))),
                         to_db(msd.mean(axis=(0, 2))))


def steady_state_db(curve_db, tail_fraction=0.2) -> float:
    curve_db = np.asarray(curve_db, dtype=float)
    if not 0 < tail_fraction <= 1:
        raise ValueError(f"tail_fraction must lie in (0, 1], got {tail_fraction}")
    n = max(1, int(round(tail_fraction * len(curve_db))))
    return float(curve_db[-n:].mean())


def compare_curves(curve_a, curve_b, tail_fraction=0.2) -> float:
    """Steady-state gain of ``b`` over ``a`` in dB: positive when ``b`` has
    the lower tail mean."""
    curve_a = np.asarray(curve_a, dtype=float)
    curve_b = np.asarray(curve_b, dtype=float)
    if curve_a.shape != curve_b.shape:
        raise ValueError(
            f"curve lengths differ: {curve_a.shape} vs {curve_b.shape}"
        )
    return steady_state_db(curve_a, tail_fraction) - steady_state_db(curve_b, tail_fraction)
