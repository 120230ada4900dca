"""Diffeomorphic reparameterizations and optimization in the transformed space.

A map t takes optimization coordinates psi to circuit parameters
theta = t(psi).  Running a method in psi-space means optimizing the
composed cost f(t(psi)); its gradient and metrics follow by the chain
rule from the theta-space quantities at t(psi):

    grad_psi f = J^T grad_theta f,   T_psi = J^T T_theta J

with J the Jacobian of t.  Natural-gradient trajectories mapped back
through t should coincide with the plain theta-space trajectories (up to
the Euler discretization error); vanilla gradient descent has no such
guarantee.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gradients import gradient, parameter_shift_jacobian
from .metrics import MetricTensor, SingularMetricError, fubini_study, fubini_study_sampled, hamiltonian_aware, natural_direction
from .optimizers import (
    BUDGET_EXHAUSTED,
    CONVERGED,
    GRADIENT_NORM_TOL,
    HQNG,
    QNG,
    SINGULAR_METRIC,
    VG,
    OptimizerConfig,
    RunRecord,
)
from .gradients import exact_cost
from .sampling import make_estimator


@dataclass(frozen=True)
class AxisScaling:
    """theta_i = scale_i * psi_i."""

    name: str
    scales: tuple[float, ...]

    def forward(self, psi: np.ndarray) -> np.ndarray:
        return np.asarray(self.scales) * psi

    def jacobian(self, psi: np.ndarray) -> np.ndarray:
        return np.diag(self.scales)

    def inverse(self, theta: np.ndarray) -> np.ndarray:
        return theta / np.asarray(self.scales)


@dataclass(frozen=True)
class TangentWarp:
    """theta_i = 2 arctan(factor * tan(psi_i / 2)), a diffeomorphism of the circle."""

    name: str = "tan-warp"
    factor: float = 2.0

    def forward(self, psi: np.ndarray) -> np.ndarray:
        return 2.0 * np.arctan(self.factor * np.tan(0.5 * psi))

    def jacobian(self, psi: np.ndarray) -> np.ndarray:
        half = 0.5 * psi
        diag = self.factor / (np.cos(half) ** 2 + self.factor**2 * np.sin(half) ** 2)
        return np.diag(diag)

    def inverse(self, theta: np.ndarray) -> np.ndarray:
        # principal branch; valid for theta components in (-pi, pi)
        return 2.0 * np.arctan(np.tan(0.5 * theta) / self.factor)


def standard_maps(m: int) -> dict[str, object]:
    """The three bundled maps for an m-parameter circuit."""
    stretch = lambda a, b: tuple(a if i % 2 == 0 else b for i in range(m))
    return {
        "scale-a": AxisScaling("scale-a", stretch(0.8, 1.2)),
        "scale-b": AxisScaling("scale-b", stretch(1.2, 0.8)),
        "tan-warp": TangentWarp(),
    }


def run_reparameterized(ansatz, h, config: OptimizerConfig, reparam, initial_psi,
                        ground_energy: float | None = None) -> RunRecord:
    """Optimize in psi-space through ``reparam``; the trace holds psi coordinates.

    Map the returned params through ``reparam.forward`` to compare
    trajectories in theta-space.
    """
    if config.method not in (VG, QNG, HQNG):
        raise ValueError("reparameterized runs support VG, QNG and HQNG")
    psi = np.asarray(initial_psi, dtype=float).copy()
    if psi.shape != (ansatz.n_params,):
        raise ValueError(f"expected {ansatz.n_params} initial parameter(s), got {psi.shape}")
    estimator = make_estimator(config.shots, config.seed)
    policy = config.policy()

    psi_trace = [psi.copy()]
    energies = [exact_cost(ansatz, h, reparam.forward(psi))]
    charges = [0]
    status = BUDGET_EXHAUSTED

    for _ in range(config.max_steps):
        theta = reparam.forward(psi)
        jac_map = reparam.jacobian(psi)
        term_jac = parameter_shift_jacobian(ansatz, h, theta, estimator)
        grad_psi = jac_map.T @ gradient(h, term_jac)
        try:
            if config.method == VG:
                direction = grad_psi
            elif config.method == QNG:
                if config.shots is None:
                    a_theta = fubini_study(ansatz, theta, meter=estimator).entries
                else:
                    a_theta = fubini_study_sampled(ansatz, theta, estimator).entries
                a_psi = jac_map.T @ a_theta @ jac_map
                direction = natural_direction(a_psi, grad_psi, policy)
            else:  # HQNG: transform the per-term Jacobian, then build T in psi-space
                t_psi = hamiltonian_aware(h, jac_map.T @ term_jac)
                direction = natural_direction(t_psi, grad_psi, policy)
        except SingularMetricError:
            status = SINGULAR_METRIC
            break
        psi = psi - config.eta * direction
        psi_trace.append(psi.copy())
        energies.append(exact_cost(ansatz, h, reparam.forward(psi)))
        charges.append(estimator.count)
        if ground_energy is not None and energies[-1] - ground_energy <= config.energy_tolerance:
            status = CONVERGED
            break
        if float(np.linalg.norm(grad_psi)) < GRADIENT_NORM_TOL:
            status = CONVERGED
            break

    return RunRecord(
        params=np.array(psi_trace),
        energies=np.array(energies),
        cumulative_estimations=np.array(charges, dtype=np.int64),
        status=status,
        ground_energy=ground_energy,
    )


def map_trace(reparam, psi_trace: np.ndarray) -> np.ndarray:
    """Apply the map rowwise: psi trajectory -> theta trajectory."""
    return np.array([reparam.forward(row) for row in psi_trace])
