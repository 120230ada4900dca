"""Metric tensors for natural-gradient updates and the linear solves behind them.

Three constructors:

* ``fubini_study``         -- A_ij = Re[<di|dj> - <di|phi><phi|dj>], exact via
                              derivative statevectors.
* ``hamiltonian_aware``    -- T = (1 / (2 sqrt(sum_r a_r^2))) * sum_r a_r^2 J_ir J_jr,
                              built from the already-paid term Jacobian.
* ``full_pauli_pullback``  -- G over all 4^n Pauli strings with unit weights;
                              satisfies G = 2^(n+1) A.

Cost model: the Fubini-Study tensor is charged 2m(m+1) quantities per
evaluation (m(m+1)/2 symmetric elements, four quantities each), mirroring
hardware estimation even though the simulator computes it exactly.  The
Hamiltonian-aware tensor charges nothing beyond the Jacobian.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ansatz import Ansatz
from .gradients import parameter_shift_jacobian
from .pauli import Hamiltonian, full_pauli_basis
from .simulator import derivative_states, fidelity, prepare_state

PULLBACK_QUBIT_LIMIT = 4


class SingularMetricError(RuntimeError):
    """Linear solve failed because the metric tensor is singular or indefinite."""


@dataclass(frozen=True)
class MetricTensor:
    entries: np.ndarray
    kind: str  # "FubiniStudy" | "HamiltonianAware" | "FullPauliPullback"

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class ExactSolve:
    """Cholesky solve; errors on singular or indefinite tensors."""


@dataclass(frozen=True)
class PseudoInverse:
    """Moore-Penrose via symmetric eigendecomposition, truncating below rcond * lambda_max."""

    rcond: float = 1e-10


@dataclass(frozen=True)
class Regularized:
    """Solve (t + lam * I) d = grad."""

    lam: float = 0.1


def qng_metric_charge(m: int) -> int:
    """Quantities a hardware run pays per Fubini-Study evaluation."""
    return 2 * m * (m + 1)


def fubini_study(ansatz: Ansatz, params, meter=None) -> MetricTensor:
    """Exact Fubini-Study tensor from derivative statevectors."""
    m = ansatz.n_params
    if meter is not None:
        meter.charge(qng_metric_charge(m))
    if m == 0:
        return MetricTensor(np.zeros((0, 0)), "FubiniStudy")
    phi = prepare_state(ansatz, params)
    derivs = np.array(derivative_states(ansatz, params))
    gram = derivs.conj() @ derivs.T
    overlaps = derivs.conj() @ phi  # <d_i | phi>
    a = gram.real - np.real(np.outer(overlaps, overlaps.conj()))
    return MetricTensor(_symmetrize(a), "FubiniStudy")


def fubini_study_sampled(ansatz: Ansatz, params, estimator) -> MetricTensor:
    """Fubini-Study tensor from the four-point fidelity shift rule.

    A_ij = -(1/8) * sum over s_i, s_j in {+,-} of s_i s_j F(theta + s_i
    (pi/2) e_i + s_j (pi/2) e_j), with F the overlap probability against
    the unshifted state.  Exact for the supported gate set when the
    estimator is exact; each of the four F values is one charged quantity,
    so one evaluation costs 2m(m+1).  With shots the result is a noisy,
    not necessarily positive semidefinite, estimate.
    """
    params = np.asarray(params, dtype=float)
    m = ansatz.n_params
    a = np.zeros((m, m))
    if m == 0:
        return MetricTensor(a, "FubiniStudy")
    base = prepare_state(ansatz, params)
    half_pi = 0.5 * np.pi
    for i in range(m):
        for j in range(i, m):
            acc = 0.0
            for s_i in (1.0, -1.0):
                for s_j in (1.0, -1.0):
                    shifted = params.copy()
                    shifted[i] += s_i * half_pi
                    shifted[j] += s_j * half_pi
                    overlap = fidelity(base, prepare_state(ansatz, shifted))
                    acc += s_i * s_j * estimator.estimate_probability(overlap)
            a[i, j] = a[j, i] = -0.125 * acc
    return MetricTensor(a, "FubiniStudy")


def hamiltonian_aware(h: Hamiltonian, term_jacobian: np.ndarray) -> MetricTensor:
    """T = (1 / (2 sqrt(sum_r a_r^2))) * J diag(a_r^2) J^T.

    Reuses the term Jacobian already paid for by the gradient; no further
    quantities are charged.
    """
    if term_jacobian.ndim != 2 or term_jacobian.shape[1] != h.n_terms:
        raise ValueError(
            f"term Jacobian must be (m, {h.n_terms}), got {term_jacobian.shape}"
        )
    coeffs = h.coefficients
    prefactor = 1.0 / (2.0 * np.sqrt(np.sum(coeffs**2)))
    scaled = term_jacobian * coeffs  # columns scaled by a_r
    return MetricTensor(_symmetrize(prefactor * (scaled @ scaled.T)), "HamiltonianAware")


def full_pauli_pullback(ansatz: Ansatz, params) -> MetricTensor:
    """G_ij = sum over all 4^n Pauli strings of tr(d_i rho P) tr(d_j rho P)."""
    n = ansatz.n_qubits
    if n > PULLBACK_QUBIT_LIMIT:
        raise ValueError(
            f"full-basis pullback limited to {PULLBACK_QUBIT_LIMIT} qubits, got {n}"
        )
    if ansatz.n_params == 0:
        return MetricTensor(np.zeros((0, 0)), "FullPauliPullback")
    basis_h = Hamiltonian((1.0, t) for t in full_pauli_basis(n))
    jac = parameter_shift_jacobian(ansatz, basis_h, params)
    return MetricTensor(_symmetrize(jac @ jac.T), "FullPauliPullback")


def regularize(t: MetricTensor, lam: float) -> MetricTensor:
    """t + lam * I, same kind."""
    if lam < 0:
        raise ValueError("regularization strength must be nonnegative")
    return MetricTensor(t.entries + lam * np.eye(t.dim), t.kind)


def natural_direction(t, grad: np.ndarray, policy=Regularized()) -> np.ndarray:
    """Solve t d = grad under the chosen inverse policy."""
    entries = t.entries if isinstance(t, MetricTensor) else np.asarray(t, dtype=float)
    grad = np.asarray(grad, dtype=float)
    if entries.shape != (grad.shape[0], grad.shape[0]):
        raise ValueError(f"metric {entries.shape} does not match gradient {grad.shape}")
    if grad.shape[0] == 0:
        return np.zeros(0)
    if isinstance(policy, ExactSolve):
        try:
            factor = np.linalg.cholesky(entries)
        except np.linalg.LinAlgError:
            smallest = float(np.linalg.eigvalsh(entries)[0])
            raise SingularMetricError(
                f"metric not positive definite (smallest eigenvalue {smallest:.6e})"
            ) from None
        return _cholesky_solve(factor, grad)
    if isinstance(policy, PseudoInverse):
        eigvals, eigvecs = np.linalg.eigh(entries)
        lam_max = float(np.max(np.abs(eigvals))) if eigvals.size else 0.0
        keep = np.abs(eigvals) > policy.rcond * lam_max
        if not np.any(keep):
            return np.zeros_like(grad)
        coords = eigvecs.T @ grad
        coords = np.where(keep, coords / np.where(keep, eigvals, 1.0), 0.0)
        return eigvecs @ coords
    if isinstance(policy, Regularized):
        if policy.lam < 0:
            raise ValueError("regularization strength must be nonnegative")
        system = entries + policy.lam * np.eye(entries.shape[0])
        try:
            return np.linalg.solve(system, grad)
        except np.linalg.LinAlgError:
            smallest = float(np.linalg.eigvalsh(system)[0])
            raise SingularMetricError(
                f"regularized metric singular (smallest eigenvalue {smallest:.6e})"
            ) from None
    raise TypeError(f"unknown inverse policy {policy!r}")


def rank_probe(t: MetricTensor, tolerance: float) -> int:
    """Numerical rank: eigenvalues above tolerance * lambda_max."""
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    if t.dim == 0:
        return 0
    eigvals = np.linalg.eigvalsh(t.entries)
    lam_max = float(eigvals[-1])
    if lam_max <= 0:
        return 0
    return int(np.sum(eigvals > tolerance * lam_max))


def _symmetrize(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.T)


def _cholesky_solve(factor: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    y = np.linalg.solve(factor, rhs)
    return np.linalg.solve(factor.T, y)
