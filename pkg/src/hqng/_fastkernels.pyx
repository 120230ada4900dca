# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled statevector kernels (hot path).

Same surface and program encoding as ``_pykernels``; see that module for
the layout documentation.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

KIND_1Q = 0
KIND_CNOT = 1
KIND_ROT = 2

cdef extern from "math.h" nogil:
    double cos(double x)
    double sin(double x)

cdef extern from *:
    """
    static inline int hqng_parity(long long x) { return __builtin_parityll(x); }
    """
    int hqng_parity(long long x) nogil

ctypedef double complex cplx

cdef inline cplx _ipow(int k) noexcept nogil:
    k = k & 3
    if k == 0:
        return 1.0 + 0.0j
    if k == 1:
        return 0.0 + 1.0j
    if k == 2:
        return -1.0 + 0.0j
    return 0.0 - 1.0j


cdef void _apply_1q_c(cplx[::1] psi, long long bit,
                      cplx m00, cplx m01, cplx m10, cplx m11) noexcept nogil:
    cdef long long dim = psi.shape[0]
    cdef long long stride = 1ll << bit
    cdef long long pair = 2 * stride
    cdef long long base = 0
    cdef long long off, i, j
    cdef cplx a, b
    while base < dim:
        for off in range(stride):
            i = base + off
            j = i + stride
            a = psi[i]
            b = psi[j]
            psi[i] = m00 * a + m01 * b
            psi[j] = m10 * a + m11 * b
        base += pair


cdef void _apply_cnot_c(cplx[::1] psi, long long cbit, long long tbit) noexcept nogil:
    cdef long long dim = psi.shape[0]
    cdef long long tmask = 1ll << tbit
    cdef long long b, j
    cdef cplx tmp
    for b in range(dim):
        if ((b >> cbit) & 1) == 1 and (b & tmask) == 0:
            j = b | tmask
            tmp = psi[b]
            psi[b] = psi[j]
            psi[j] = tmp


cdef void _apply_rotation_c(cplx[::1] psi, long long x_mask, long long z_mask,
                            int n_y, double theta) noexcept nogil:
    cdef long long dim = psi.shape[0]
    cdef double c = cos(0.5 * theta)
    cdef double s = sin(0.5 * theta)
    cdef cplx fac = _ipow(n_y) * (0.0 - 1.0j) * s
    cdef long long b, j
    cdef cplx va, vb
    cdef double sa, sb
    if x_mask == 0:
        for b in range(dim):
            sa = 1.0 - 2.0 * hqng_parity(b & z_mask)
            psi[b] = (c + fac * sa) * psi[b]
    else:
        for b in range(dim):
            j = b ^ x_mask
            if b < j:
                sa = 1.0 - 2.0 * hqng_parity(b & z_mask)
                sb = 1.0 - 2.0 * hqng_parity(j & z_mask)
                va = psi[b]
                vb = psi[j]
                psi[b] = c * va + fac * sb * vb
                psi[j] = c * vb + fac * sa * va


def apply_pauli(cplx[::1] src, long long x_mask, long long z_mask, int n_y):
    """Return P @ src for the Pauli string with the given masks."""
    cdef long long dim = src.shape[0]
    out_arr = np.empty(dim, dtype=np.complex128)
    cdef cplx[::1] out = out_arr
    cdef cplx ph = _ipow(n_y)
    cdef long long b, j
    cdef double sign
    with nogil:
        for b in range(dim):
            j = b ^ x_mask
            sign = 1.0 - 2.0 * hqng_parity(j & z_mask)
            out[b] = ph * sign * src[j]
    return out_arr


def pauli_expectation(cplx[::1] psi, long long x_mask, long long z_mask, int n_y):
    """Return <psi| P |psi> (complex; caller checks the imaginary part)."""
    cdef cplx ph = _ipow(n_y)
    cdef cplx acc = 0
    cdef long long dim = psi.shape[0]
    cdef long long b, j
    cdef double sign
    with nogil:
        for b in range(dim):
            j = b ^ x_mask
            sign = 1.0 - 2.0 * hqng_parity(j & z_mask)
            acc = acc + psi[b].conjugate() * ph * sign * psi[j]
    return complex(acc)


def run_program(cplx[::1] psi,
                long long[::1] kinds,
                long long[::1] a0,
                long long[::1] a1,
                long long[::1] a2,
                long long[::1] a3,
                cplx[:, :, ::1] mats,
                double[::1] params,
                long long start,
                long long stop):
    """Apply gates [start, stop) of the compiled program to psi in place."""
    cdef long long g, kind
    with nogil:
        for g in range(start, stop):
            kind = kinds[g]
            if kind == 0:  # KIND_1Q
                _apply_1q_c(psi, a0[g],
                            mats[a1[g], 0, 0], mats[a1[g], 0, 1],
                            mats[a1[g], 1, 0], mats[a1[g], 1, 1])
            elif kind == 1:  # KIND_CNOT
                _apply_cnot_c(psi, a0[g], a1[g])
            else:  # KIND_ROT
                _apply_rotation_c(psi, a0[g], a1[g], <int> a2[g], params[a3[g]])
