"""Truncated boson (x) qubit^n Hilbert space and elementary operators.

Basis ordering
--------------
A basis state |n, b_1 ... b_Q> has index ``n * 2**Q + bits`` where ``bits``
is the integer whose binary digits are b_1 ... b_Q, qubit 1 being the most
significant bit. A bit value of 1 means the qubit is excited (|e>), 0 means
ground (|g>). For three qubits |1,ggg> is index 8 and |0,eee> is index 7.

Operators are returned as dense complex ``numpy`` arrays of shape
``(dim, dim)``; they are fresh arrays and safe to share read-only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError

QUBIT_KINDS = ("sx", "sy", "sz", "s+", "s-")

_PAULI = {
    "sx": np.array([[0, 1], [1, 0]], dtype=complex),
    "sy": np.array([[0, 1j], [-1j, 0]], dtype=complex),
    "sz": np.array([[-1, 0], [0, 1]], dtype=complex),
    # rows/cols ordered (g, e)
    "s+": np.array([[0, 0], [1, 0]], dtype=complex),
    "s-": np.array([[0, 1], [0, 0]], dtype=complex),
}
# sx, sy above are written in the (g, e) ordering so that s+ = (sx + i sy)/2
# raises g -> e and sz = diag(-1, +1).


@dataclass(frozen=True)
class HilbertSpace:
    """Fock levels 0..n_max-1 of one boson mode times ``n_qubits`` qubits."""

    n_max: int
    n_qubits: int

    def __post_init__(self):
        if int(self.n_max) != self.n_max or self.n_max < 2:
            raise ParameterError(f"n_max must be an integer >= 2, got {self.n_max!r}")
        if self.n_qubits not in (1, 2, 3):
            raise ParameterError(f"n_qubits must be 1, 2 or 3, got {self.n_qubits!r}")

    @property
    def qubit_dim(self) -> int:
        return 2**self.n_qubits

    @property
    def dim(self) -> int:
        return self.n_max * self.qubit_dim

    def index(self, n: int, bits: str) -> int:
        """Index of |n, bits>, where ``bits`` is a string like ``"gge"``."""
        if len(bits) != self.n_qubits or set(bits) - {"g", "e"}:
            raise ParameterError(f"bad qubit label {bits!r} for {self.n_qubits} qubits")
        if not 0 <= n < self.n_max:
            raise ParameterError(f"Fock level {n} outside 0..{self.n_max - 1}")
        value = int(bits.replace("g", "0").replace("e", "1"), 2)
        return n * self.qubit_dim + value

    def label(self, index: int) -> str:
        """Inverse of :meth:`index`, e.g. ``8 -> "1,ggg"``."""
        n, value = divmod(index, self.qubit_dim)
        bits = format(value, f"0{self.n_qubits}b").replace("0", "g").replace("1", "e")
        return f"{n},{bits}"

    def basis_state(self, label: str) -> np.ndarray:
        """Basis ket for a label such as ``"1,ggg"``."""
        n, bits = parse_label(label)
        psi = np.zeros(self.dim, dtype=complex)
        psi[self.index(n, bits)] = 1.0
        return psi

    def labels(self) -> list[str]:
        return [self.label(i) for i in range(self.dim)]


def parse_label(label: str) -> tuple[int, str]:
    try:
        n, bits = label.replace("|", "").replace(">", "").split(",")
        return int(n), bits.strip()
    except ValueError:
        raise ParameterError(f"cannot parse state label {label!r}; expected e.g. '1,ggg'") from None


def build_space(n_max: int, n_qubits: int) -> HilbertSpace:
    return HilbertSpace(n_max, n_qubits)


def _embed(space: HilbertSpace, boson: np.ndarray, qubit_ops: dict[int, np.ndarray]) -> np.ndarray:
    mats = [boson]
    for q in range(1, space.n_qubits + 1):
        mats.append(qubit_ops.get(q, np.eye(2, dtype=complex)))
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


def boson_annihilation(space: HilbertSpace) -> np.ndarray:
    """a|n> = sqrt(n)|n-1> on the Fock factor, identity on the qubits."""
    a = np.diag(np.sqrt(np.arange(1, space.n_max, dtype=float)), k=1).astype(complex)
    return _embed(space, a, {})


def boson_number(space: HilbertSpace) -> np.ndarray:
    n = np.diag(np.arange(space.n_max, dtype=float)).astype(complex)
    return _embed(space, n, {})


def identity(space: HilbertSpace) -> np.ndarray:
    return np.eye(space.dim, dtype=complex)


def qubit_operator(space: HilbertSpace, qubit_index: int, kind: str) -> np.ndarray:
    """Pauli or ladder operator ``kind`` acting on qubit ``qubit_index`` (1-based)."""
    if not 1 <= qubit_index <= space.n_qubits:
        raise ParameterError(f"qubit_index {qubit_index} outside 1..{space.n_qubits}")
    if kind not in _PAULI:
        raise ParameterError(f"unknown qubit operator {kind!r}; expected one of {QUBIT_KINDS}")
    return _embed(space, np.eye(space.n_max, dtype=complex), {qubit_index: _PAULI[kind]})


def qubit_projector(space: HilbertSpace, bits: str) -> np.ndarray:
    """Projector onto the qubit configuration ``bits`` (mode traced as identity)."""
    ops = {}
    for q, b in enumerate(bits, start=1):
        p = np.zeros((2, 2), dtype=complex)
        p[int(b == "e"), int(b == "e")] = 1.0
        ops[q] = p
    if len(bits) != space.n_qubits:
        raise ParameterError(f"bad qubit label {bits!r} for {space.n_qubits} qubits")
    return _embed(space, np.eye(space.n_max, dtype=complex), ops)
