"""Optimization loop: VG, QNG, H-QNG, and OP-VQITE steps with cost accounting.

Per-step measurement charges (identity-free Hamiltonian, m parameters,
v terms):

* VG       2mv                  (parameter-shift gradient)
* QNG      2mv + 2m(m+1)        (gradient + Fubini-Study tensor)
* H-QNG    2mv                  (metric reuses the gradient's Jacobian)
* OP-VQITE 2mv + the deduplicated anticommutator expectations

Identity terms are never measured, so a Hamiltonian containing one charges
2m(v-1) for its Jacobian; the counts above are exact integers either way.
Energies recorded in the trace are evaluated exactly and charge nothing:
they are diagnostics of the optimization, not part of it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .ansatz import Ansatz
from .gradients import exact_cost, gradient, parameter_shift_jacobian
from .metrics import (
    MetricTensor,
    Regularized,
    SingularMetricError,
    fubini_study,
    fubini_study_sampled,
    hamiltonian_aware,
    natural_direction,
)
from .pauli import Hamiltonian, pauli_product
from .sampling import make_estimator
from .simulator import expectation, prepare_state

VG = "VG"
QNG = "QNG"
HQNG = "HQNG"
OPVQITE = "OPVQITE"
METHODS = (VG, QNG, HQNG, OPVQITE)

CONVERGED = "Converged"
BUDGET_EXHAUSTED = "BudgetExhausted"
SINGULAR_METRIC = "SingularMetric"

CHEMICAL_ACCURACY = 1.593e-3  # Hartree; 1 kcal/mol
GRADIENT_NORM_TOL = 1e-12


@dataclass
class OptimizerConfig:
    method: str = HQNG
    eta: float = 0.05
    lam: float = 0.1
    inverse_policy: object | None = None  # defaults to Regularized(lam)
    max_steps: int = 100
    energy_tolerance: float = 0.0
    shots: int | None = None
    seed: int = 0

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.eta <= 0:
            raise ValueError("learning rate must be positive")
        if self.lam < 0:
            raise ValueError("regularization strength must be nonnegative")
        if self.max_steps < 1:
            raise ValueError("max_steps must be at least 1")
        if self.energy_tolerance < 0:
            raise ValueError("energy tolerance must be nonnegative")
        if self.shots is not None and self.shots < 1:
            raise ValueError("shots must be positive when given")

    def policy(self):
        return self.inverse_policy if self.inverse_policy is not None else Regularized(self.lam)


@dataclass
class RunRecord:
    """Per-step trace of one optimization run."""

    params: np.ndarray  # (steps+1, m)
    energies: np.ndarray  # (steps+1,)
    cumulative_estimations: np.ndarray  # (steps+1,) ints, starts at 0
    status: str
    ground_energy: float | None = None

    @property
    def steps(self) -> int:
        return self.energies.shape[0] - 1

    @property
    def delta_e(self) -> np.ndarray | None:
        if self.ground_energy is None:
            return None
        return self.energies - self.ground_energy

    def steps_to_accuracy(self, threshold: float) -> int | None:
        """First step index with delta_e <= threshold, None if never reached."""
        de = self.delta_e
        if de is None:
            return None
        hits = np.flatnonzero(de <= threshold)
        return int(hits[0]) if hits.size else None

    def estimations_at_accuracy(self, threshold: float) -> int | None:
        k = self.steps_to_accuracy(threshold)
        return int(self.cumulative_estimations[k]) if k is not None else None


def run_record_csv(record: RunRecord) -> str:
    """CSV emission: step, energy[, delta_e], cumulative_estimations, theta coordinates."""
    m = record.params.shape[1]
    de = record.delta_e
    columns = ["step", "energy"]
    if de is not None:
        columns.append("delta_e")
    columns.append("cumulative_estimations")
    columns.extend(f"theta_{i}" for i in range(m))
    lines = [",".join(columns)]
    for k in range(record.steps + 1):
        row = [str(k), format(record.energies[k], ".17g")]
        if de is not None:
            row.append(format(de[k], ".17g"))
        row.append(str(int(record.cumulative_estimations[k])))
        row.extend(format(x, ".17g") for x in record.params[k])
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def vg_step(ansatz, h, params, config, estimator=None) -> np.ndarray:
    """theta - eta * grad f."""
    direction, _ = _direction_and_gradient(VG, ansatz, h, params, config, estimator)
    return np.asarray(params, dtype=float) - config.eta * direction


def qng_step(ansatz, h, params, config, estimator=None) -> np.ndarray:
    """theta - eta * A^{-1} grad f under the configured inverse policy."""
    direction, _ = _direction_and_gradient(QNG, ansatz, h, params, config, estimator)
    return np.asarray(params, dtype=float) - config.eta * direction


def hqng_step(ansatz, h, params, config, estimator=None) -> np.ndarray:
    """theta - eta * T^{-1} grad f under the configured inverse policy."""
    direction, _ = _direction_and_gradient(HQNG, ansatz, h, params, config, estimator)
    return np.asarray(params, dtype=float) - config.eta * direction


def op_vqite_step(ansatz, h, params, config, estimator=None) -> np.ndarray:
    """theta - eta * G^{-1} b with the operator set {a_r P_r}."""
    direction, _ = _direction_and_gradient(OPVQITE, ansatz, h, params, config, estimator)
    return np.asarray(params, dtype=float) - config.eta * direction


def op_vqite_system(ansatz, h, params, estimator=None, term_jacobian=None):
    """OP-VQITE metric G and gradient-side vector b for the operator set {a_r P_r}.

    G_ij = sum_r a_r^2 J_ir J_jr (no prefactor, so G = 2 sqrt(sum a_r^2) T)
    b    = sum_r V(rho, a_r P_r) * a_r J[:, r]
    V(rho, O) = tr(rho {O, H}) - 2 tr(rho H) tr(rho O)

    The anticommutators {P_r, P_s} reduce through the Pauli algebra to
    single strings (or vanish for anticommuting pairs); every distinct
    non-identity string at the base circuit is estimated once, which is
    what the meter charges on top of the Jacobian.
    """
    if term_jacobian is None:
        term_jacobian = parameter_shift_jacobian(ansatz, h, params, estimator)
    coeffs = h.coefficients
    v = h.n_terms

    # anticommutator structure: per r, the weights of surviving product strings
    needed: dict[str, object] = {}
    combos: list[list[tuple[float, str]]] = []
    for r, term_r in enumerate(h.terms):
        if not term_r.is_identity:
            needed.setdefault(term_r.letters, term_r)
        entries = []
        for s, term_s in enumerate(h.terms):
            phase, prod = pauli_product(term_r, term_s)
            if phase.imag == 0:  # commuting pair: {P_r, P_s} = 2 Re(phase) prod
                entries.append((2.0 * phase.real * coeffs[s], prod.letters))
                if not prod.is_identity:
                    needed.setdefault(prod.letters, prod)
        combos.append(entries)

    psi = prepare_state(ansatz, params)
    values = {"I" * h.n_qubits: 1.0}
    for letters, term in needed.items():
        exact = expectation(psi, term)
        values[letters] = estimator.estimate(exact) if estimator is not None else exact

    term_values = np.array([values[t.letters] for t in h.terms])
    energy = float(coeffs @ term_values)
    v_vec = np.array(
        [
            coeffs[r]
            * (
                sum(w * values[letters] for w, letters in combos[r])
                - 2.0 * energy * term_values[r]
            )
            for r in range(v)
        ]
    )
    b = term_jacobian @ (v_vec * coeffs)
    scaled = term_jacobian * coeffs
    metric = scaled @ scaled.T
    return 0.5 * (metric + metric.T), b, term_jacobian


def op_vqite_step_charge(h: Hamiltonian) -> int:
    """Base-circuit quantities OP-VQITE charges on top of the 2m(v - v_id) Jacobian."""
    distinct: set[str] = set()
    for term_r in h.terms:
        if not term_r.is_identity:
            distinct.add(term_r.letters)
        for term_s in h.terms:
            phase, prod = pauli_product(term_r, term_s)
            if phase.imag == 0 and not prod.is_identity:
                distinct.add(prod.letters)
    return len(distinct)


def _direction_and_gradient(method, ansatz, h, params, config, estimator):
    """(update direction, gradient of f) for one step; charges the estimator."""
    params = np.asarray(params, dtype=float)
    policy = config.policy()
    if method == OPVQITE:
        metric, b, jac = op_vqite_system(ansatz, h, params, estimator)
        return natural_direction(metric, b, policy), gradient(h, jac)
    jac = parameter_shift_jacobian(ansatz, h, params, estimator)
    grad = gradient(h, jac)
    if method == VG:
        return grad, grad
    if method == QNG:
        if config.shots is None or estimator is None:
            metric = fubini_study(ansatz, params, meter=estimator)
        else:
            metric = fubini_study_sampled(ansatz, params, estimator)
        return natural_direction(metric, grad, policy), grad
    if method == HQNG:
        metric = hamiltonian_aware(h, jac)
        return natural_direction(metric, grad, policy), grad
    raise ValueError(f"unknown method {method!r}")


def run(ansatz: Ansatz, h: Hamiltonian, config: OptimizerConfig, initial_params,
        ground_energy: float | None = None) -> RunRecord:
    """Iterate the configured step rule and record the full trace.

    Stops on delta_e <= energy_tolerance (when a ground energy is given),
    on gradient norm < 1e-12, on a singular metric under an exact policy,
    or when max_steps is exhausted.  Deterministic for a fixed config.
    """
    params = np.asarray(initial_params, dtype=float).copy()
    if params.shape != (ansatz.n_params,):
        raise ValueError(f"expected {ansatz.n_params} initial parameter(s), got {params.shape}")
    estimator = make_estimator(config.shots, config.seed)

    param_trace = [params.copy()]
    energies = [exact_cost(ansatz, h, params)]
    charges = [0]
    status = BUDGET_EXHAUSTED

    for _ in range(config.max_steps):
        try:
            direction, grad = _direction_and_gradient(
                config.method, ansatz, h, params, config, estimator
            )
        except SingularMetricError:
            status = SINGULAR_METRIC
            break
        params = params - config.eta * direction
        param_trace.append(params.copy())
        energies.append(exact_cost(ansatz, h, params))
        charges.append(estimator.count)
        if ground_energy is not None and energies[-1] - ground_energy <= config.energy_tolerance:
            status = CONVERGED
            break
        if float(np.linalg.norm(grad)) < GRADIENT_NORM_TOL:
            status = CONVERGED
            break

    return RunRecord(
        params=np.array(param_trace),
        energies=np.array(energies),
        cumulative_estimations=np.array(charges, dtype=np.int64),
        status=status,
        ground_energy=ground_energy,
    )


def continuous_trajectory(ansatz, h, method, t_end, dt, initial_params,
                          inverse_policy=None, lam: float = 0.0) -> np.ndarray:
    """Explicit-Euler path of the natural-gradient flow; alias for run with eta = dt."""
    if method not in (QNG, HQNG):
        raise ValueError("continuous trajectories are defined for QNG and HQNG")
    if dt <= 0:
        raise ValueError("dt must be positive")
    n_steps = int(round(t_end / dt))
    if n_steps < 1:
        raise ValueError("t_end must cover at least one step")
    config = OptimizerConfig(
        method=method, eta=dt, lam=lam, inverse_policy=inverse_policy, max_steps=n_steps
    )
    return run(ansatz, h, config, initial_params).params
