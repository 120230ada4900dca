"""Parameterized circuits: gate types, validation, file format, kernel programs.

A circuit is an ordered gate list over a fixed register.  Parameterized
gates are Pauli-string rotations ``exp(-i theta P / 2)``; each parameter
slot ``p<k>`` is used by exactly one gate, so the parameter-shift rule
needs exactly two evaluations per parameter.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .pauli import PauliTerm

_SQ2 = 1.0 / np.sqrt(2.0)

FIXED_MATRICES = {
    "H": np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class AnsatzParseError(ValueError):
    """Raised for malformed ansatz file content; message carries the line number."""


@dataclass(frozen=True)
class Gate:
    """One gate: ``H``/``X``/``Y``/``Z``, ``CNOT``, or a rotation ``R<axes>``."""

    name: str
    qubits: tuple[int, ...]
    param: int | None = None

    @staticmethod
    def fixed(name: str, qubit: int) -> "Gate":
        if name not in FIXED_MATRICES:
            raise ValueError(f"unknown fixed gate {name!r}")
        return Gate(name, (qubit,))

    @staticmethod
    def cnot(control: int, target: int) -> "Gate":
        return Gate("CNOT", (control, target))

    @staticmethod
    def rotation(axes: str, qubits, param: int) -> "Gate":
        qubits = tuple(qubits)
        if not axes or set(axes) - set("XYZ"):
            raise ValueError(f"rotation axes must be letters from XYZ, got {axes!r}")
        if len(axes) != len(qubits):
            raise ValueError(
                f"rotation R{axes} names {len(axes)} qubit(s) but got {len(qubits)}"
            )
        if param < 0:
            raise ValueError("parameter index must be nonnegative")
        return Gate("R" + axes, qubits, param)

    @property
    def is_rotation(self) -> bool:
        return self.name.startswith("R") and self.name not in FIXED_MATRICES

    @property
    def axes(self) -> str:
        if not self.is_rotation:
            raise ValueError(f"{self.name} has no rotation axes")
        return self.name[1:]

    def rotation_axis(self, n_qubits: int) -> PauliTerm:
        """Full-register Pauli string generating this rotation."""
        letters = ["I"] * n_qubits
        for q, ax in zip(self.qubits, self.axes):
            letters[q] = ax
        return PauliTerm("".join(letters))


class Ansatz:
    """Ordered gate list over ``n_qubits`` defining ``params -> |phi(params)>``.

    Gates are validated and compiled once into the flat program the kernel
    backends execute.
    """

    def __init__(self, n_qubits: int, gates):
        if n_qubits < 1:
            raise ValueError("n_qubits must be positive")
        gates = tuple(gates)
        seen_params: dict[int, int] = {}
        for pos, gate in enumerate(gates):
            if len(set(gate.qubits)) != len(gate.qubits):
                raise ValueError(f"gate {pos}: repeated qubit in {gate}")
            for q in gate.qubits:
                if not 0 <= q < n_qubits:
                    raise ValueError(f"gate {pos}: qubit {q} out of range for {n_qubits} qubits")
            if gate.is_rotation:
                if gate.param in seen_params:
                    raise ValueError(
                        f"gate {pos}: parameter p{gate.param} already used by gate "
                        f"{seen_params[gate.param]} (parameters may not be shared)"
                    )
                seen_params[gate.param] = pos
        n_params = max(seen_params) + 1 if seen_params else 0
        missing = set(range(n_params)) - set(seen_params)
        if missing:
            raise ValueError(f"parameter indices must be contiguous; missing p{sorted(missing)}")

        self.n_qubits = n_qubits
        self.gates = gates
        self.n_params = n_params
        self.param_gate_index = tuple(seen_params[k] for k in range(n_params))
        self._compile()

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits

    def _compile(self) -> None:
        program = compile_gates(self.gates, self.n_qubits)
        self._kinds, self._a0, self._a1, self._a2, self._a3, self._mats = program

    def run(self, psi: np.ndarray, params: np.ndarray, start: int = 0, stop: int | None = None) -> None:
        """Apply gates [start, stop) to ``psi`` in place."""
        if stop is None:
            stop = len(self.gates)
        kernels.run_program(
            psi, self._kinds, self._a0, self._a1, self._a2, self._a3,
            self._mats, params, start, stop,
        )

    def rotation_masks(self, param: int) -> tuple[int, int, int]:
        """(x_mask, z_mask, n_y) of the rotation generated by parameter ``param``."""
        g = self.param_gate_index[param]
        return int(self._a0[g]), int(self._a1[g]), int(self._a2[g])


def compile_gates(gates, n_qubits: int):
    """Flatten gates into the parallel arrays the kernel executor consumes."""
    kinds, a0, a1, a2, a3 = [], [], [], [], []
    mats: list[np.ndarray] = []
    for gate in gates:
        if gate.name == "CNOT":
            kinds.append(kernels.KIND_CNOT)
            a0.append(n_qubits - 1 - gate.qubits[0])
            a1.append(n_qubits - 1 - gate.qubits[1])
            a2.append(0)
            a3.append(0)
        elif gate.is_rotation:
            axis = gate.rotation_axis(n_qubits)
            kinds.append(kernels.KIND_ROT)
            a0.append(axis.x_mask)
            a1.append(axis.z_mask)
            a2.append(axis.n_y % 4)
            a3.append(gate.param)
        else:
            kinds.append(kernels.KIND_1Q)
            a0.append(n_qubits - 1 - gate.qubits[0])
            a1.append(len(mats))
            a2.append(0)
            a3.append(0)
            mats.append(FIXED_MATRICES[gate.name])
    return (
        np.array(kinds, dtype=np.int64),
        np.array(a0, dtype=np.int64),
        np.array(a1, dtype=np.int64),
        np.array(a2, dtype=np.int64),
        np.array(a3, dtype=np.int64),
        np.array(mats, dtype=complex) if mats else np.zeros((0, 2, 2), dtype=complex),
    )


def parse_ansatz(text: str) -> Ansatz:
    """Parse the ansatz file format.

    First data line is ``qubits <n>``; each following line is one gate:
    ``H q0``, ``CNOT q0 q1``, ``RY q1 p0``, ``RXX q0 q1 p2`` ...
    Comments (``#``) and blank lines are ignored.
    """
    n_qubits = None
    gates: list[Gate] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if n_qubits is None:
            if len(fields) != 2 or fields[0] != "qubits":
                raise AnsatzParseError(f"line {lineno}: expected header 'qubits <n>', got {line!r}")
            try:
                n_qubits = int(fields[1])
            except ValueError:
                raise AnsatzParseError(f"line {lineno}: bad qubit count {fields[1]!r}") from None
            if n_qubits < 1:
                raise AnsatzParseError(f"line {lineno}: qubit count must be positive")
            continue
        try:
            gates.append(_parse_gate_line(fields))
        except ValueError as exc:
            raise AnsatzParseError(f"line {lineno}: {exc}") from None
    if n_qubits is None:
        raise AnsatzParseError("missing 'qubits <n>' header")
    try:
        return Ansatz(n_qubits, gates)
    except ValueError as exc:
        raise AnsatzParseError(str(exc)) from None


def _parse_gate_line(fields: list[str]) -> Gate:
    name = fields[0]

    def qubit(tok: str) -> int:
        if not tok.startswith("q"):
            raise ValueError(f"expected qubit 'q<i>', got {tok!r}")
        return int(tok[1:])

    if name == "CNOT":
        if len(fields) != 3:
            raise ValueError("CNOT takes exactly two qubits")
        control, target = qubit(fields[1]), qubit(fields[2])
        if control == target:
            raise ValueError("CNOT control and target must differ")
        return Gate.cnot(control, target)
    if name in FIXED_MATRICES:
        if len(fields) != 2:
            raise ValueError(f"{name} takes exactly one qubit")
        return Gate.fixed(name, qubit(fields[1]))
    if name.startswith("R") and len(name) > 1:
        axes = name[1:]
        if len(fields) != len(axes) + 2:
            raise ValueError(f"{name} takes {len(axes)} qubit(s) and one parameter slot")
        qubits = [qubit(tok) for tok in fields[1:-1]]
        ptok = fields[-1]
        if not ptok.startswith("p"):
            raise ValueError(f"expected parameter slot 'p<k>', got {ptok!r}")
        return Gate.rotation(axes, qubits, int(ptok[1:]))
    raise ValueError(f"unknown gate {name!r}")


def serialize_ansatz(a: Ansatz) -> str:
    lines = [f"qubits {a.n_qubits}"]
    for gate in a.gates:
        toks = [gate.name] + [f"q{q}" for q in gate.qubits]
        if gate.param is not None:
            toks.append(f"p{gate.param}")
        lines.append(" ".join(toks))
    return "\n".join(lines) + "\n"


def load_ansatz(path) -> Ansatz:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_ansatz(fh.read())
