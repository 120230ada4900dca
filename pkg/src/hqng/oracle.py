"""Brute-force ground truth: dense eigensolves and finite-difference checks.

Everything here is verification-only.  The dense eigensolve supplies
ground energies for delta-E traces; the finite-difference gradient and
metric are the independent oracles the analytic paths are tested against.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ansatz import Ansatz
from .gradients import exact_cost
from .metrics import MetricTensor
from .pauli import DENSE_QUBIT_LIMIT, Hamiltonian, dense_matrix
from .simulator import fidelity, prepare_state

HS_QUBIT_LIMIT = 6


@dataclass(frozen=True)
class GroundSolution:
    energy: float
    degeneracy: int
    state: np.ndarray


def ground_state(h: Hamiltonian) -> GroundSolution:
    """Full symmetric eigensolve of the dense Hamiltonian."""
    if h.n_qubits > DENSE_QUBIT_LIMIT:
        raise ValueError(
            f"dense eigensolve limited to {DENSE_QUBIT_LIMIT} qubits, got {h.n_qubits}"
        )
    matrix = dense_matrix(h)
    eigvals, eigvecs = np.linalg.eigh(matrix)
    scale = max(float(np.max(np.abs(eigvals))), 1.0)
    degeneracy = int(np.sum(eigvals <= eigvals[0] + 1e-8 * scale))
    return GroundSolution(float(eigvals[0]), degeneracy, eigvecs[:, 0])


def fd_gradient(ansatz: Ansatz, h: Hamiltonian, params, h_step: float = 1e-5) -> np.ndarray:
    """Central finite differences of the exact cost."""
    if h_step <= 0:
        raise ValueError("h_step must be positive")
    params = np.asarray(params, dtype=float)
    grad = np.empty(ansatz.n_params)
    for i in range(ansatz.n_params):
        shifted = params.copy()
        shifted[i] += h_step
        plus = exact_cost(ansatz, h, shifted)
        shifted[i] = params[i] - h_step
        minus = exact_cost(ansatz, h, shifted)
        grad[i] = (plus - minus) / (2.0 * h_step)
    return grad


def fd_metric(ansatz: Ansatz, params, h_step: float = 1e-3) -> MetricTensor:
    """Fubini-Study tensor as half the Hessian of the infidelity at zero shift.

    Uses four-point second-order central differences of
    1 - |<phi(theta)|phi(theta + delta)>|^2.
    """
    if h_step <= 0:
        raise ValueError("h_step must be positive")
    params = np.asarray(params, dtype=float)
    m = ansatz.n_params
    base = prepare_state(ansatz, params)

    def infidelity(delta: np.ndarray) -> float:
        return 1.0 - fidelity(base, prepare_state(ansatz, params + delta))

    a = np.zeros((m, m))
    for i in range(m):
        for j in range(i, m):
            acc = 0.0
            for s_i in (1.0, -1.0):
                for s_j in (1.0, -1.0):
                    delta = np.zeros(m)
                    delta[i] += s_i * h_step
                    delta[j] += s_j * h_step
                    acc += s_i * s_j * infidelity(delta)
            a[i, j] = a[j, i] = 0.5 * acc / (4.0 * h_step**2)
    return MetricTensor(a, "FubiniStudy")


def dense_hs_metric(ansatz: Ansatz, params, h_step: float = 1e-5) -> np.ndarray:
    """(1/2) tr(d_i rho d_j rho) with density-matrix derivatives from finite differences."""
    if ansatz.n_qubits > HS_QUBIT_LIMIT:
        raise ValueError(
            f"dense density-matrix metric limited to {HS_QUBIT_LIMIT} qubits"
        )
    params = np.asarray(params, dtype=float)
    m = ansatz.n_params

    def density(theta: np.ndarray) -> np.ndarray:
        psi = prepare_state(ansatz, theta)
        return np.outer(psi, psi.conj())

    drho = []
    for i in range(m):
        shifted = params.copy()
        shifted[i] += h_step
        plus = density(shifted)
        shifted[i] = params[i] - h_step
        minus = density(shifted)
        drho.append((plus - minus) / (2.0 * h_step))
    metric = np.empty((m, m))
    for i in range(m):
        for j in range(i, m):
            val = 0.5 * np.trace(drho[i] @ drho[j]).real
            metric[i, j] = metric[j, i] = val
    return metric
