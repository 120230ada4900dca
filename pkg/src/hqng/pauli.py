"""n-qubit Pauli strings and Hamiltonians built from them.

Conventions (shared by every module in this package):

* a Pauli string is written with qubit 0 as the *leftmost* letter,
* qubit 0 is the *most significant bit* of a statevector index,
* letters are ordered I < X < Y < Z wherever an ordering is needed.

Internally a string is stored as two bit masks (x-mask, z-mask) so that
``P |b> = i**n_y * (-1)**parity(b & z) |b ^ x>`` where ``n_y`` counts Y
letters.  This is the representation the statevector kernels consume.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, reduce
from itertools import product

import numpy as np

LETTERS = "IXYZ"

DENSE_QUBIT_LIMIT = 12
BASIS_QUBIT_LIMIT = 6

# single-letter product table: (a, b) -> (phase, c) with a*b = phase*c
_PRODUCT_1Q = {
    ("I", "I"): (1, "I"), ("I", "X"): (1, "X"), ("I", "Y"): (1, "Y"), ("I", "Z"): (1, "Z"),
    ("X", "I"): (1, "X"), ("X", "X"): (1, "I"), ("X", "Y"): (1j, "Z"), ("X", "Z"): (-1j, "Y"),
    ("Y", "I"): (1, "Y"), ("Y", "X"): (-1j, "Z"), ("Y", "Y"): (1, "I"), ("Y", "Z"): (1j, "X"),
    ("Z", "I"): (1, "Z"), ("Z", "X"): (1j, "Y"), ("Z", "Y"): (-1j, "X"), ("Z", "Z"): (1, "I"),
}


class HamiltonianParseError(ValueError):
    """Raised for malformed Hamiltonian file content; message carries the line number."""


@dataclass(frozen=True)
class PauliTerm:
    """One n-qubit Pauli string, e.g. ``PauliTerm("XZI")``."""

    letters: str

    def __post_init__(self):
        if not self.letters:
            raise ValueError("empty Pauli string")
        bad = set(self.letters) - set(LETTERS)
        if bad:
            raise ValueError(f"invalid Pauli letter(s) {sorted(bad)} in {self.letters!r}")

    @property
    def n_qubits(self) -> int:
        return len(self.letters)

    @property
    def is_identity(self) -> bool:
        return set(self.letters) == {"I"}

    @cached_property
    def x_mask(self) -> int:
        return self._mask("XY")

    @cached_property
    def z_mask(self) -> int:
        return self._mask("YZ")

    @cached_property
    def n_y(self) -> int:
        return self.letters.count("Y")

    def _mask(self, which: str) -> int:
        n = self.n_qubits
        mask = 0
        for q, letter in enumerate(self.letters):
            if letter in which:
                mask |= 1 << (n - 1 - q)  # qubit 0 = most significant bit
        return mask

    def __str__(self) -> str:
        return self.letters


def identity_term(n_qubits: int) -> PauliTerm:
    return PauliTerm("I" * n_qubits)


def pauli_product(p: PauliTerm, q: PauliTerm) -> tuple[complex, PauliTerm]:
    """Return ``(phase, term)`` with ``p @ q = phase * term`` and phase in {1, i, -1, -i}."""
    if p.n_qubits != q.n_qubits:
        raise ValueError(f"qubit count mismatch: {p.n_qubits} vs {q.n_qubits}")
    phase: complex = 1
    out = []
    for a, b in zip(p.letters, q.letters):
        f, c = _PRODUCT_1Q[(a, b)]
        phase *= f
        out.append(c)
    return phase, PauliTerm("".join(out))


def terms_commute(p: PauliTerm, q: PauliTerm) -> bool:
    """True iff the anticommutator {p, q} is nonzero (product phase is real)."""
    phase, _ = pauli_product(p, q)
    return phase.imag == 0


def full_pauli_basis(n_qubits: int) -> list[PauliTerm]:
    """All 4**n strings, lexicographic with I < X < Y < Z per qubit."""
    if n_qubits > BASIS_QUBIT_LIMIT:
        raise ValueError(f"full basis limited to {BASIS_QUBIT_LIMIT} qubits, got {n_qubits}")
    if n_qubits < 1:
        raise ValueError("n_qubits must be positive")
    return [PauliTerm("".join(ls)) for ls in product(LETTERS, repeat=n_qubits)]


class Hamiltonian:
    """Weighted sum of Pauli strings, ``sum_r a_r P_r``.

    Duplicate strings are merged (coefficients summed, first-occurrence order
    kept) and terms whose merged coefficient is exactly zero are dropped.
    """

    def __init__(self, pairs):
        merged: dict[str, float] = {}
        order: list[PauliTerm] = []
        n = None
        for coeff, term in pairs:
            if n is None:
                n = term.n_qubits
            elif term.n_qubits != n:
                raise ValueError(
                    f"inconsistent Pauli string lengths: {term.n_qubits} vs {n}"
                )
            if term.letters in merged:
                merged[term.letters] += float(coeff)
            else:
                merged[term.letters] = float(coeff)
                order.append(term)
        if n is None:
            raise ValueError("Hamiltonian needs at least one term")
        kept = [(merged[t.letters], t) for t in order if merged[t.letters] != 0.0]
        if not kept:
            raise ValueError("all terms cancelled; Hamiltonian must keep at least one term")
        self.n_qubits: int = n
        self.terms: tuple[PauliTerm, ...] = tuple(t for _, t in kept)
        self.coefficients: np.ndarray = np.array([c for c, _ in kept], dtype=float)

    @property
    def n_terms(self) -> int:
        return len(self.terms)

    def pairs(self):
        return list(zip(self.coefficients.tolist(), self.terms))

    def scaled(self, factor: float) -> "Hamiltonian":
        return Hamiltonian((factor * c, t) for c, t in self.pairs())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Hamiltonian):
            return NotImplemented
        return (
            self.n_qubits == other.n_qubits
            and self.terms == other.terms
            and np.array_equal(self.coefficients, other.coefficients)
        )

    def __repr__(self) -> str:
        body = " + ".join(f"{c:g}*{t}" for c, t in self.pairs())
        return f"Hamiltonian({body})"


def parse_hamiltonian(text: str) -> Hamiltonian:
    """Parse the Hamiltonian file format: one ``<coefficient> <letters>`` per line.

    Lines starting with ``#`` and blank lines are ignored.  Errors report the
    offending 1-based line number.
    """
    pairs = []
    n = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 2:
            raise HamiltonianParseError(
                f"line {lineno}: expected '<coefficient> <letters>', got {line!r}"
            )
        try:
            coeff = float(fields[0])
        except ValueError:
            raise HamiltonianParseError(
                f"line {lineno}: malformed coefficient {fields[0]!r}"
            ) from None
        try:
            term = PauliTerm(fields[1])
        except ValueError as exc:
            raise HamiltonianParseError(f"line {lineno}: {exc}") from None
        if n is None:
            n = term.n_qubits
        elif term.n_qubits != n:
            raise HamiltonianParseError(
                f"line {lineno}: string length {term.n_qubits} differs from earlier length {n}"
            )
        pairs.append((coeff, term))
    if not pairs:
        raise HamiltonianParseError("empty Hamiltonian file")
    return Hamiltonian(pairs)


def serialize_hamiltonian(h: Hamiltonian) -> str:
    lines = [f"{format(c, '.17g')} {t.letters}" for c, t in h.pairs()]
    return "\n".join(lines) + "\n"


def load_hamiltonian(path) -> Hamiltonian:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_hamiltonian(fh.read())


def dense_term(p: PauliTerm) -> np.ndarray:
    """Dense 2**n x 2**n matrix of one Pauli string (entries in {0, ±1, ±i})."""
    dim = 1 << p.n_qubits
    idx = np.arange(dim)
    par = _parity(idx & p.z_mask)
    phases = (1j ** p.n_y) * (1.0 - 2.0 * par)
    m = np.zeros((dim, dim), dtype=complex)
    m[idx ^ p.x_mask, idx] = phases
    return m


def dense_matrix(h: Hamiltonian) -> np.ndarray:
    """Dense Hermitian matrix of the Hamiltonian (oracle support)."""
    if h.n_qubits > DENSE_QUBIT_LIMIT:
        raise ValueError(
            f"dense matrix limited to {DENSE_QUBIT_LIMIT} qubits, got {h.n_qubits}"
        )
    return reduce(
        lambda acc, pair: acc + pair[0] * dense_term(pair[1]),
        h.pairs(),
        np.zeros((1 << h.n_qubits, 1 << h.n_qubits), dtype=complex),
    )


def _parity(values: np.ndarray) -> np.ndarray:
    v = values.astype(np.int64, copy=True)
    for shift in (32, 16, 8, 4, 2, 1):
        v ^= v >> shift
    return v & 1
