"""Per-term expectations, the parameter-shift term Jacobian, and cost gradients.

The m x v term Jacobian ``J[i, r] = d tr(rho P_r) / d theta_i`` is the
shared ingredient: the gradient contracts it with the coefficients, and the
Hamiltonian-aware metric reuses it without further circuit evaluations.
"""

from __future__ import annotations

import numpy as np

from .ansatz import Ansatz
from .pauli import Hamiltonian
from .simulator import expectation, prepare_state

SHIFT = 0.5 * np.pi  # exact for exp(-i theta P / 2) with P**2 = I


def state_term_expectations(state: np.ndarray, h: Hamiltonian, estimator=None) -> np.ndarray:
    """Per-term expectations of an already prepared state."""
    values = np.empty(h.n_terms)
    for r, term in enumerate(h.terms):
        if term.is_identity:
            values[r] = 1.0  # exact, never measured
        else:
            exact = expectation(state, term)
            values[r] = estimator.estimate(exact) if estimator is not None else exact
    return values


def term_expectations(ansatz: Ansatz, h: Hamiltonian, params, estimator=None) -> np.ndarray:
    """values[r] = tr(rho_theta P_r); charged through ``estimator`` when given."""
    if ansatz.n_qubits != h.n_qubits:
        raise ValueError(
            f"ansatz acts on {ansatz.n_qubits} qubits, Hamiltonian on {h.n_qubits}"
        )
    return state_term_expectations(prepare_state(ansatz, params), h, estimator)


def cost(h: Hamiltonian, values: np.ndarray) -> float:
    """sum_r a_r * values[r]."""
    if values.shape != (h.n_terms,):
        raise ValueError(f"expected {h.n_terms} term values, got shape {values.shape}")
    return float(h.coefficients @ values)


def exact_cost(ansatz: Ansatz, h: Hamiltonian, params) -> float:
    """tr(rho_theta H) evaluated exactly and free of meter charges."""
    return cost(h, term_expectations(ansatz, h, params))


def parameter_shift_jacobian(ansatz: Ansatz, h: Hamiltonian, params, estimator=None) -> np.ndarray:
    """J[i, r] = (values_r(theta + pi/2 e_i) - values_r(theta - pi/2 e_i)) / 2.

    Exactly 2m circuit preparations; each non-identity term expectation is
    one charged quantity, so an identity-free Hamiltonian costs 2 m v.
    """
    params = np.asarray(params, dtype=float)
    m = ansatz.n_params
    jac = np.empty((m, h.n_terms))
    for i in range(m):
        shifted = params.copy()
        shifted[i] += SHIFT
        plus = term_expectations(ansatz, h, shifted, estimator)
        shifted[i] = params[i] - SHIFT
        minus = term_expectations(ansatz, h, shifted, estimator)
        jac[i] = 0.5 * (plus - minus)
    return jac


def gradient(h: Hamiltonian, term_jacobian: np.ndarray) -> np.ndarray:
    """grad f[i] = sum_r a_r * J[i, r]."""
    if term_jacobian.ndim != 2 or term_jacobian.shape[1] != h.n_terms:
        raise ValueError(
            f"term Jacobian must be (m, {h.n_terms}), got {term_jacobian.shape}"
        )
    return term_jacobian @ h.coefficients
