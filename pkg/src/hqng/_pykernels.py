"""Pure-numpy statevector kernels.

Fallback backend with the same surface as the compiled module
(``_fastkernels``): a gate-program executor plus Pauli application and
expectation.  Statevectors are 1-D contiguous complex128 arrays; qubit 0
is the most significant bit of the index.

Program encoding (parallel int64 arrays, one row per gate):
  kind == KIND_1Q   : a0 = bit position of the target qubit, a1 = matrix index
  kind == KIND_CNOT : a0 = control bit position, a1 = target bit position
  kind == KIND_ROT  : a0 = x-mask, a1 = z-mask, a2 = (#Y mod 4), a3 = parameter index
"""

import numpy as np

KIND_1Q = 0
KIND_CNOT = 1
KIND_ROT = 2

_I_POW = np.array([1, 1j, -1, -1j], dtype=complex)


def _parity(values: np.ndarray) -> np.ndarray:
    v = values.astype(np.int64, copy=True)
    for shift in (32, 16, 8, 4, 2, 1):
        v ^= v >> shift
    return v & 1


def apply_pauli(src: np.ndarray, x_mask: int, z_mask: int, n_y: int) -> np.ndarray:
    """Return P @ src for the Pauli string with the given masks."""
    idx = np.arange(src.shape[0])
    perm = idx ^ x_mask
    signs = 1.0 - 2.0 * _parity(perm & z_mask)
    return (_I_POW[n_y % 4] * signs) * src[perm]


def pauli_expectation(psi: np.ndarray, x_mask: int, z_mask: int, n_y: int) -> complex:
    """Return <psi| P |psi> (complex; caller checks the imaginary part)."""
    return complex(np.vdot(psi, apply_pauli(psi, x_mask, z_mask, n_y)))


def _apply_1q(psi: np.ndarray, bit: int, mat: np.ndarray) -> None:
    stride = 1 << bit
    view = psi.reshape(-1, 2, stride)
    upper = view[:, 0, :].copy()
    lower = view[:, 1, :]
    view[:, 0, :] = mat[0, 0] * upper + mat[0, 1] * lower
    view[:, 1, :] = mat[1, 0] * upper + mat[1, 1] * lower


def _apply_cnot(psi: np.ndarray, control_bit: int, target_bit: int) -> None:
    idx = np.arange(psi.shape[0])
    sel = ((idx >> control_bit) & 1 == 1) & ((idx >> target_bit) & 1 == 0)
    i0 = idx[sel]
    i1 = i0 | (1 << target_bit)
    tmp = psi[i0].copy()
    psi[i0] = psi[i1]
    psi[i1] = tmp


def _apply_rotation(psi: np.ndarray, x_mask: int, z_mask: int, n_y: int, theta: float) -> None:
    # exp(-i theta P / 2) psi = cos(theta/2) psi - i sin(theta/2) P psi
    rotated = apply_pauli(psi, x_mask, z_mask, n_y)
    psi *= np.cos(0.5 * theta)
    psi -= 1j * np.sin(0.5 * theta) * rotated


def run_program(
    psi: np.ndarray,
    kinds: np.ndarray,
    a0: np.ndarray,
    a1: np.ndarray,
    a2: np.ndarray,
    a3: np.ndarray,
    mats: np.ndarray,
    params: np.ndarray,
    start: int,
    stop: int,
) -> None:
    """Apply gates [start, stop) of the compiled program to psi in place."""
    for g in range(start, stop):
        kind = kinds[g]
        if kind == KIND_1Q:
            _apply_1q(psi, int(a0[g]), mats[int(a1[g])])
        elif kind == KIND_CNOT:
            _apply_cnot(psi, int(a0[g]), int(a1[g]))
        else:
            _apply_rotation(psi, int(a0[g]), int(a1[g]), int(a2[g]), float(params[int(a3[g])]))
