"""Expectation estimators and the quantity-estimation meter.

Every scalar a hardware run would have to measure passes through one
estimator call, which increments the shared counter ``count``.  The exact
estimator returns its input unchanged (the counter still models hardware
cost); the shot estimator replaces the value with a binomial draw,
``(2k - N) / N`` with ``k ~ Binomial(N, (1 + p) / 2)``, which is
distributionally identical to averaging N single-shot ±1 outcomes.

Identity Pauli strings never reach an estimator: their expectation is 1
with no measurement, so they are never charged.
"""

from __future__ import annotations

import numpy as np


class ExactEstimator:
    """Pass-through estimator; charges the meter, never perturbs values."""

    def __init__(self):
        self.count = 0

    def estimate(self, p_exact: float) -> float:
        self.count += 1
        return p_exact

    def estimate_probability(self, prob: float) -> float:
        self.count += 1
        return prob

    def charge(self, n_quantities: int) -> None:
        self.count += n_quantities


class ShotEstimator:
    """Finite-shot estimator: one binomial draw of ``n_shots`` per quantity."""

    def __init__(self, n_shots: int, seed: int = 0):
        if n_shots < 1:
            raise ValueError("n_shots must be positive")
        self.n_shots = n_shots
        self.count = 0
        self._rng = np.random.Generator(np.random.PCG64(seed))

    def estimate(self, p_exact: float) -> float:
        """Estimate an expectation value in [-1, 1]."""
        if abs(p_exact) > 1.0 + 1e-10:
            raise ValueError(f"expectation {p_exact} outside [-1, 1]")
        p01 = 0.5 * (1.0 + min(max(p_exact, -1.0), 1.0))
        k = self._rng.binomial(self.n_shots, p01)
        self.count += 1
        return (2.0 * k - self.n_shots) / self.n_shots

    def estimate_probability(self, prob: float) -> float:
        """Estimate a probability-like quantity in [0, 1] (e.g. a fidelity)."""
        if prob < -1e-10 or prob > 1.0 + 1e-10:
            raise ValueError(f"probability {prob} outside [0, 1]")
        p01 = min(max(prob, 0.0), 1.0)
        k = self._rng.binomial(self.n_shots, p01)
        self.count += 1
        return k / self.n_shots

    def charge(self, n_quantities: int) -> None:
        self.count += n_quantities


def make_estimator(shots: int | None, seed: int = 0):
    """Exact estimator when ``shots`` is None, shot-sampled otherwise."""
    if shots is None:
        return ExactEstimator()
    return ShotEstimator(shots, seed)
