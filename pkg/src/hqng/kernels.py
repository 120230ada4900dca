"""Kernel backend selection.

Prefers the compiled Cython core and falls back to the pure-numpy kernels
when the extension is not built.  Override with the ``HQNG_KERNELS``
environment variable: ``auto`` (default), ``compiled``, or ``python``.
"""

import os

_requested = os.environ.get("HQNG_KERNELS", "auto").lower()
if _requested not in ("auto", "compiled", "python"):
    raise RuntimeError(
        f"HQNG_KERNELS must be 'auto', 'compiled' or 'python', got {_requested!r}"
    )

if _requested == "python":
    from . import _pykernels as _impl

    BACKEND = "python"
else:
    try:
        from . import _fastkernels as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        if _requested == "compiled":
            raise
        from . import _pykernels as _impl

        BACKEND = "python"

KIND_1Q = _impl.KIND_1Q
KIND_CNOT = _impl.KIND_CNOT
KIND_ROT = _impl.KIND_ROT

run_program = _impl.run_program
apply_pauli = _impl.apply_pauli
pauli_expectation = _impl.pauli_expectation
