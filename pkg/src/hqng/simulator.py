"""Exact statevector simulation: state preparation, expectations, derivatives."""

from __future__ import annotations

import numpy as np

from . import kernels
from .ansatz import Ansatz, Gate, compile_gates
from .pauli import PauliTerm

_IMAG_BUG_TOL = 1e-9


def zero_state(n_qubits: int) -> np.ndarray:
    psi = np.zeros(1 << n_qubits, dtype=complex)
    psi[0] = 1.0
    return psi


def prepare_state(ansatz: Ansatz, params) -> np.ndarray:
    """Apply all gates in order to |0...0>."""
    params = np.asarray(params, dtype=float)
    if params.shape != (ansatz.n_params,):
        raise ValueError(
            f"expected {ansatz.n_params} parameter(s), got shape {params.shape}"
        )
    psi = zero_state(ansatz.n_qubits)
    ansatz.run(psi, params)
    return psi


def apply_gate(state: np.ndarray, gate: Gate, params=()) -> np.ndarray:
    """Return the state with one gate applied (the input is left untouched)."""
    n_qubits = _infer_n_qubits(state)
    params = np.asarray(params, dtype=float)
    for q in gate.qubits:
        if not 0 <= q < n_qubits:
            raise ValueError(f"qubit {q} out of range for {n_qubits}-qubit state")
    if gate.is_rotation and gate.param >= params.shape[0]:
        raise ValueError(f"gate needs parameter p{gate.param} but got {params.shape[0]} value(s)")
    kinds, a0, a1, a2, a3, mats = compile_gates((gate,), n_qubits)
    psi = np.array(state, dtype=complex)
    kernels.run_program(psi, kinds, a0, a1, a2, a3, mats, params, 0, 1)
    return psi


def expectation(state: np.ndarray, term: PauliTerm) -> float:
    """<state| P |state>; real for Hermitian P, imaginary residue is checked."""
    if state.shape[0] != 1 << term.n_qubits:
        raise ValueError(
            f"state dimension {state.shape[0]} does not match {term.n_qubits}-qubit term"
        )
    val = kernels.pauli_expectation(np.ascontiguousarray(state), term.x_mask, term.z_mask, term.n_y)
    if abs(val.imag) >= _IMAG_BUG_TOL:
        raise RuntimeError(
            f"expectation of {term} has imaginary part {val.imag:.3e}; kernel bug"
        )
    return float(val.real)


def apply_pauli_string(state: np.ndarray, term: PauliTerm) -> np.ndarray:
    """Return P @ state."""
    return kernels.apply_pauli(np.ascontiguousarray(state), term.x_mask, term.z_mask, term.n_y)


def derivative_states(ansatz: Ansatz, params) -> list[np.ndarray]:
    """Analytic |d phi / d theta_i> for every parameter (not normalized).

    For the rotation exp(-i theta P / 2) the derivative inserts (-i P / 2)
    right after the generating gate.
    """
    params = np.asarray(params, dtype=float)
    if params.shape != (ansatz.n_params,):
        raise ValueError(
            f"expected {ansatz.n_params} parameter(s), got shape {params.shape}"
        )
    n_gates = len(ansatz.gates)
    out = []
    for i in range(ansatz.n_params):
        g = ansatz.param_gate_index[i]
        x_mask, z_mask, n_y = ansatz.rotation_masks(i)
        psi = zero_state(ansatz.n_qubits)
        ansatz.run(psi, params, 0, g + 1)
        psi = kernels.apply_pauli(psi, x_mask, z_mask, n_y)
        psi *= -0.5j
        ansatz.run(psi, params, g + 1, n_gates)
        out.append(psi)
    return out


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """|<a|b>|^2."""
    return float(abs(np.vdot(a, b)) ** 2)


def _infer_n_qubits(state: np.ndarray) -> int:
    dim = state.shape[0]
    n = dim.bit_length() - 1
    if dim != 1 << n or dim < 2:
        raise ValueError(f"state length {dim} is not a power of two")
    return n
