"""Dense complex linear algebra for small qubit registers.

Conventions used throughout the package:

* Qubit 0 is the most significant bit of the computational-basis index,
  so ``|q0 q1 ... q_{n-1}>`` maps to the integer ``q0 q1 ... q_{n-1}``
  read as binary. A state vector holds ``2**n`` complex amplitudes in
  that order; a density matrix is the matching ``2**n x 2**n`` array.
* Rotation gates use the half-angle convention,
  ``R_a(theta) = exp(-i (theta/2) sigma_a)``; ``pauli_exponential`` uses
  the full-angle form ``exp(-i alpha n.sigma)``. Callers convert between
  the two (the gate compiler centralizes the factor of 2).
* Everything is double-precision dense numpy; at <= 7 qubits (dim 128)
  sparsity buys nothing.

All functions are pure: inputs are never mutated.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from itertools import combinations
import math

import numpy as np

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)

_PAULIS = {"x": PAULI_X, "y": PAULI_Y, "z": PAULI_Z}

DEFAULT_UNITARY_CAP = 10  # circuit_unitary refuses larger registers


def rotation_matrix(axis: str, theta: float) -> np.ndarray:
    """2x2 rotation ``exp(-i (theta/2) sigma_axis)`` for axis in {x, y, z}."""
    if axis not in _PAULIS:
        raise ValueError(f"unknown rotation axis {axis!r}, expected 'x', 'y' or 'z'")
    if not math.isfinite(theta):
        raise ValueError("rotation angle must be finite")
    half = 0.5 * theta
    c, s = math.cos(half), math.sin(half)
    if axis == "x":
        return np.array([[c, -1j * s], [-1j * s, c]])
    if axis == "y":
        return np.array([[c, -s], [s, c]], dtype=complex)
    return np.array([[c - 1j * s, 0], [0, c + 1j * s]])


def pauli_exponential(axis_vector: np.ndarray, alpha: float) -> np.ndarray:
    """``exp(-i alpha n.sigma) = I cos(alpha) - i (n.sigma) sin(alpha)``.

    ``axis_vector`` is a real 3-vector (x, y, z components) of unit norm.
    Note the full-angle convention: this rotates by ``2*alpha`` on the
    Bloch sphere, unlike the half-angle ``rotation_matrix``.
    """
    n = np.asarray(axis_vector, dtype=float)
    if n.shape != (3,):
        raise ValueError("axis vector must have exactly 3 components")
    if abs(np.linalg.norm(n) - 1.0) > 1e-10:
        raise ValueError("axis vector must have unit norm")
    n_dot_sigma = n[0] * PAULI_X + n[1] * PAULI_Y + n[2] * PAULI_Z
    return math.cos(alpha) * IDENTITY_2 - 1j * math.sin(alpha) * n_dot_sigma


class GateKind(Enum):
    ROT_X = "rx"
    ROT_Y = "ry"
    ROT_Z = "rz"
    CNOT = "cx"


_ROTATION_AXES = {GateKind.ROT_X: "x", GateKind.ROT_Y: "y", GateKind.ROT_Z: "z"}


@dataclass(frozen=True)
class GateOp:
    """A single primitive gate: an axis rotation or a CNOT.

    Rotations carry ``angle`` (radians, half-angle convention) and no
    control; CNOT carries ``control`` and no angle.
    """

    kind: GateKind
    target: int
    control: int | None = None
    angle: float | None = None

    def __post_init__(self) -> None:
        if self.kind is GateKind.CNOT:
            if self.control is None or self.angle is not None:
                raise ValueError("CNOT takes a control qubit and no angle")
            if self.control == self.target:
                raise ValueError("CNOT control and target must differ")
        else:
            if self.control is not None:
                raise ValueError("rotations take no control qubit")
            if self.angle is None or not math.isfinite(self.angle):
                raise ValueError("rotation angle must be a finite number")

    @property
    def qubits(self) -> tuple[int, ...]:
        if self.control is None:
            return (self.target,)
        return (self.control, self.target)


@dataclass(frozen=True)
class Circuit:
    """Ordered gate list; ``ops[0]`` is applied to the state first."""

    n_qubits: int
    ops: tuple[GateOp, ...] = ()

    def __post_init__(self) -> None:
        if self.n_qubits < 1:
            raise ValueError("circuit needs at least one qubit")
        object.__setattr__(self, "ops", tuple(self.ops))
        for op in self.ops:
            for q in op.qubits:
                if not 0 <= q < self.n_qubits:
                    raise ValueError(f"qubit index {q} out of range for {self.n_qubits} qubits")

    def __len__(self) -> int:
        return len(self.ops)

    def __iter__(self):
        return iter(self.ops)


def qubit_pairs(n: int) -> list[tuple[int, int]]:
    """All unordered qubit pairs (i, j) with i < j, in lexicographic order."""
    return list(combinations(range(n), 2))


def basis_state(n: int, index: int = 0) -> np.ndarray:
    """Computational basis state |index> of an n-qubit register."""
    state = np.zeros(2**n, dtype=complex)
    state[index] = 1.0
    return state


@lru_cache(maxsize=None)
def z_diagonal(n: int, q: int) -> np.ndarray:
    """Diagonal of Z on qubit q as a length-2^n array of +-1."""
    if not 0 <= q < n:
        raise ValueError(f"qubit index {q} out of range for {n} qubits")
    bits = (np.arange(2**n) >> (n - 1 - q)) & 1
    diag = 1.0 - 2.0 * bits
    diag.flags.writeable = False
    return diag


def n_qubits_of(state: np.ndarray) -> int:
    """Register size implied by a state's dimension; rejects non-powers of two."""
    n = int(round(math.log2(state.shape[0])))
    if 2**n != state.shape[0]:
        raise ValueError(f"state dimension {state.shape[0]} is not a power of two")
    return n


def _apply_1q(tensor: np.ndarray, u: np.ndarray, q: int) -> np.ndarray:
    # tensor has one axis per qubit first, then any batch axes
    out = np.tensordot(u, tensor, axes=([1], [q]))
    return np.moveaxis(out, 0, q)


def _apply_cnot(tensor: np.ndarray, control: int, target: int) -> np.ndarray:
    out = tensor.copy()
    sel0 = [slice(None)] * tensor.ndim
    sel1 = [slice(None)] * tensor.ndim
    sel0[control] = sel1[control] = 1
    sel0[target], sel1[target] = 0, 1
    out[tuple(sel0)] = tensor[tuple(sel1)]
    out[tuple(sel1)] = tensor[tuple(sel0)]
    return out


def _apply_op(tensor: np.ndarray, op: GateOp) -> np.ndarray:
    if op.kind is GateKind.CNOT:
        return _apply_cnot(tensor, op.control, op.target)
    u = rotation_matrix(_ROTATION_AXES[op.kind], op.angle)
    return _apply_1q(tensor, u, op.target)


def apply_gate(state: np.ndarray, gate: GateOp) -> np.ndarray:
    """Apply one gate to a state vector by stride updates (no 2^N matrix)."""
    n = n_qubits_of(state)
    for q in gate.qubits:
        if not 0 <= q < n:
            raise ValueError(f"qubit index {q} out of range for {n} qubits")
    tensor = state.reshape([2] * n)
    return _apply_op(tensor, gate).reshape(-1)


def apply_circuit(state: np.ndarray, circuit: Circuit) -> np.ndarray:
    """Apply circuit.ops in order to a state vector."""
    n = n_qubits_of(state)
    if n != circuit.n_qubits:
        raise ValueError(f"state has {n} qubits but circuit expects {circuit.n_qubits}")
    tensor = state.reshape([2] * n)
    for op in circuit.ops:
        tensor = _apply_op(tensor, op)
    return tensor.reshape(-1)


def circuit_unitary(circuit: Circuit, max_qubits: int = DEFAULT_UNITARY_CAP) -> np.ndarray:
    """Dense 2^N x 2^N unitary of the circuit (first op rightmost in the product)."""
    n = circuit.n_qubits
    if n > max_qubits:
        raise ValueError(f"refusing dense unitary for {n} > {max_qubits} qubits")
    dim = 2**n
    # evolve all basis columns at once; batch axis trails the qubit axes
    tensor = np.eye(dim, dtype=complex).reshape([2] * n + [dim])
    for op in circuit.ops:
        tensor = _apply_op(tensor, op)
    return tensor.reshape(dim, dim)


def expectation_zz(state: np.ndarray, i: int, j: int) -> float:
    """<Z_i Z_j> of a state vector or density matrix; always in [-1, 1]."""
    if i == j:
        raise ValueError("expectation_zz needs two distinct qubits")
    arr = np.asarray(state)
    if arr.ndim == 1:
        n = n_qubits_of(arr)
        probs = np.abs(arr) ** 2
    elif arr.ndim == 2 and arr.shape[0] == arr.shape[1]:
        n = n_qubits_of(arr[:, 0])
        probs = np.real(np.diag(arr))
    else:
        raise ValueError("expected a state vector or a square density matrix")
    for q in (i, j):
        if not 0 <= q < n:
            raise ValueError(f"qubit index {q} out of range for {n} qubits")
    value = float(np.sum(probs * z_diagonal(n, i) * z_diagonal(n, j)))
    return min(1.0, max(-1.0, value))


def frobenius_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Entrywise L2 norm of a - b."""
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b))


def is_unitary(m: np.ndarray, tol: float = 1e-12) -> bool:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return float(np.linalg.norm(m.conj().T @ m - np.eye(m.shape[0]))) < tol


def is_hermitian(m: np.ndarray, tol: float = 1e-12) -> bool:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return float(np.linalg.norm(m - m.conj().T)) < tol


def assert_normalized(state: np.ndarray, tol: float = 1e-10) -> None:
    norm_sq = float(np.sum(np.abs(state) ** 2))
    if abs(norm_sq - 1.0) > tol:
        raise ValueError(f"state is not normalized: sum |amp|^2 = {norm_sq}")


def density_matrix(state: np.ndarray) -> np.ndarray:
    """Pure-state density matrix |psi><psi|."""
    state = np.asarray(state, dtype=complex)
    return np.outer(state, state.conj())


def purity(rho: np.ndarray) -> float:
    """Tr[rho^2]; 1 for pure states."""
    return float(np.real(np.trace(rho @ rho)))
