"""Natural-gradient optimizers for variational quantum eigensolvers.

Implements and compares vanilla gradient descent, quantum natural gradient
(QNG), Hamiltonian-aware QNG, and OP-VQITE on an exact statevector
simulator, with an optional shot-noise layer and exact measurement-cost
accounting.
"""

from .ansatz import Ansatz, Gate, load_ansatz, parse_ansatz, serialize_ansatz
from .gradients import (
    cost,
    exact_cost,
    gradient,
    parameter_shift_jacobian,
    term_expectations,
)
from .kernels import BACKEND
from .metrics import (
    ExactSolve,
    MetricTensor,
    PseudoInverse,
    Regularized,
    SingularMetricError,
    fubini_study,
    fubini_study_sampled,
    full_pauli_pullback,
    hamiltonian_aware,
    natural_direction,
    rank_probe,
    regularize,
)
from .optimizers import (
    CHEMICAL_ACCURACY,
    HQNG,
    METHODS,
    OPVQITE,
    QNG,
    VG,
    OptimizerConfig,
    RunRecord,
    continuous_trajectory,
    op_vqite_system,
    run,
    run_record_csv,
)
from .oracle import GroundSolution, dense_hs_metric, fd_gradient, fd_metric, ground_state
from .pauli import (
    Hamiltonian,
    PauliTerm,
    dense_matrix,
    full_pauli_basis,
    load_hamiltonian,
    parse_hamiltonian,
    pauli_product,
    serialize_hamiltonian,
)
from .reparam import AxisScaling, TangentWarp, map_trace, run_reparameterized, standard_maps
from .sampling import ExactEstimator, ShotEstimator, make_estimator
from .simulator import (
    apply_gate,
    derivative_states,
    expectation,
    fidelity,
    prepare_state,
    zero_state,
)

__version__ = "0.1.0"
