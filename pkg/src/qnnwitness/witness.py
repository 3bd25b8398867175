"""Reference pair states and the pairwise entanglement witness.

The witness is the squared two-qubit correlation ``<Z_i Z_j>^2`` of the
evolved state. Four reference two-qubit states with known targets make up
the training set: a maximally entangled state (target 1), two unentangled
states (target 0, one of them classically correlated), and a partially
entangled state whose optimized target is 0.443. For registers larger
than the pair, the pair state is embedded with every spectator qubit
in |0>.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import apply_circuit, circuit_unitary, expectation_zz, qubit_pairs, z_diagonal
from .hamiltonian import Schedule, evolve_states, propagate

_SQRT2 = math.sqrt(2.0)
_SQRT3 = math.sqrt(3.0)
_SQRT5 = math.sqrt(5.0)


class PairStateKind(Enum):
    BELL = "Bell"  # (|00> + |11>)/sqrt(2), maximally entangled
    FLAT = "Flat"  # (|00> + |01> + |10> + |11>)/2, product state
    C = "C"        # (2|00> + |01>)/sqrt(5), classically correlated, unentangled
    P = "P"        # (|01> + |10> + |11>)/sqrt(3), partially entangled


# two-qubit amplitudes keyed by the (b_i, b_j) basis index
_PAIR_AMPLITUDES: dict[PairStateKind, dict[int, float]] = {
    PairStateKind.BELL: {0b00: 1 / _SQRT2, 0b11: 1 / _SQRT2},
    PairStateKind.FLAT: {0b00: 0.5, 0b01: 0.5, 0b10: 0.5, 0b11: 0.5},
    PairStateKind.C: {0b00: 2 / _SQRT5, 0b01: 1 / _SQRT5},
    PairStateKind.P: {0b01: 1 / _SQRT3, 0b10: 1 / _SQRT3, 0b11: 1 / _SQRT3},
}

WITNESS_TARGETS: dict[PairStateKind, float] = {
    PairStateKind.BELL: 1.0,
    PairStateKind.FLAT: 0.0,
    PairStateKind.C: 0.0,
    PairStateKind.P: 0.443,
}

METHODS = ("exact", "chunked", "gates")


def make_pair_state(kind: PairStateKind, pair: tuple[int, int], n: int) -> np.ndarray:
    """Reference pair state on qubits (i, j) of an n-qubit register."""
    i, j = pair
    if not 0 <= i < j < n:
        raise ValueError(f"pair {pair} must satisfy 0 <= i < j < {n}")
    state = np.zeros(2**n, dtype=complex)
    for bits, amplitude in _PAIR_AMPLITUDES[kind].items():
        index = ((bits >> 1) & 1) << (n - 1 - i) | (bits & 1) << (n - 1 - j)
        state[index] = amplitude
    return state


@dataclass(frozen=True)
class TrainingItem:
    kind: PairStateKind
    state: np.ndarray
    pair: tuple[int, int]
    target: float


@dataclass(frozen=True)
class TrainingSet:
    """All four reference states on every qubit pair: 4 * C(n, 2) items."""

    n_qubits: int
    items: tuple[TrainingItem, ...]

    def __len__(self) -> int:
        return len(self.items)


def build_training_set(n: int) -> TrainingSet:
    if n < 2:
        raise ValueError("a pairwise training set needs at least 2 qubits")
    items = tuple(
        TrainingItem(kind, make_pair_state(kind, (i, j), n), (i, j), WITNESS_TARGETS[kind])
        for i, j in qubit_pairs(n)
        for kind in PairStateKind
    )
    return TrainingSet(n, items)


def _final_state(initial: np.ndarray, schedule: Schedule, method: str) -> np.ndarray:
    if method == "gates":
        from .compiler import compile_schedule  # local import avoids a cycle

        circuit = compile_schedule(schedule)
        if initial.ndim == 1:
            return apply_circuit(initial, circuit)
        u = circuit_unitary(circuit)
        return u @ initial @ u.conj().T
    if method in ("exact", "chunked"):
        return propagate(initial, schedule, method)
    raise ValueError(f"unknown method {method!r}, expected one of {METHODS}")


def witness_value(
    initial: np.ndarray, pair: tuple[int, int], schedule: Schedule, method: str = "chunked"
) -> float:
    """``<Z_i Z_j>^2`` of the evolved state; always in [0, 1].

    ``initial`` may be a state vector or a density matrix. ``gates``
    routes through the compiled circuit, ``chunked`` through the
    split-operator propagator, ``exact`` through the full exponential.
    """
    initial = np.asarray(initial, dtype=complex)
    dim = 2**schedule.n_qubits
    if initial.shape[0] != dim:
        raise ValueError(f"state dimension {initial.shape[0]} does not match schedule ({dim})")
    final = _final_state(initial, schedule, method)
    return expectation_zz(final, pair[0], pair[1]) ** 2


def witness_values(training_set: TrainingSet, schedule: Schedule, method: str = "chunked") -> np.ndarray:
    """Witness of every training item, evaluated as one batch."""
    if training_set.n_qubits != schedule.n_qubits:
        raise ValueError(
            f"training set is for {training_set.n_qubits} qubits, schedule for {schedule.n_qubits}"
        )
    states = np.stack([item.state for item in training_set.items])
    if method == "gates":
        from .compiler import compile_schedule

        circuit = compile_schedule(schedule)
        finals = np.stack([apply_circuit(s, circuit) for s in states])
    else:
        finals = evolve_states(states, schedule, method)
    probs = np.abs(finals) ** 2
    values = np.empty(len(training_set.items))
    for idx, item in enumerate(training_set.items):
        i, j = item.pair
        zz = float(np.sum(probs[idx] * z_diagonal(schedule.n_qubits, i) * z_diagonal(schedule.n_qubits, j)))
        values[idx] = zz * zz
    return values
