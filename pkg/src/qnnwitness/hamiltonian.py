"""Pairwise-coupled transverse-field Hamiltonians and their propagators.

The model is ``H = sum_q (K_q X_q + eps_q Z_q) + sum_{i<j} zeta_ij Z_i Z_j``
with all-to-all coupling, piecewise constant in time: a Schedule splits the
total evolution time into equal chunks, each with its own parameter set.
All quantities are dimensionless with hbar = 1.

Two propagation methods are provided. ``exact`` exponentiates the full
Hamiltonian of each chunk; ``chunked`` splits each chunk into the product
of its single-qubit and pair exponentials, which is a first-order
approximation because the transverse terms do not commute with the
couplings. Within a chunk the pair factors act first, then the single-qubit
factors in ascending qubit order; chunks apply in chronological order.
The gate compiler reproduces exactly this ordering, so ``chunked`` and
compiled circuits agree to round-off.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache, reduce
from pathlib import Path

import numpy as np

from .core import IDENTITY_2, PAULI_X, is_hermitian, qubit_pairs, z_diagonal


@dataclass(frozen=True)
class ChunkParams:
    """Hamiltonian parameters held constant over one time chunk.

    ``tunneling`` (X coefficients) and ``bias`` (Z coefficients) are
    per-qubit; ``coupling`` (ZZ coefficients) is per unordered pair in
    lexicographic order, matching :func:`qnnwitness.core.qubit_pairs`.
    """

    tunneling: tuple[float, ...]
    bias: tuple[float, ...]
    coupling: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "tunneling", tuple(float(x) for x in self.tunneling))
        object.__setattr__(self, "bias", tuple(float(x) for x in self.bias))
        object.__setattr__(self, "coupling", tuple(float(x) for x in self.coupling))
        n = len(self.tunneling)
        if n < 1:
            raise ValueError("need at least one qubit")
        if len(self.bias) != n:
            raise ValueError("tunneling and bias arrays must have equal length")
        if len(self.coupling) != n * (n - 1) // 2:
            raise ValueError(f"expected {n * (n - 1) // 2} couplings for {n} qubits, got {len(self.coupling)}")

    @property
    def n_qubits(self) -> int:
        return len(self.tunneling)

    @property
    def is_symmetric(self) -> bool:
        return (
            len(set(self.tunneling)) == 1
            and len(set(self.bias)) == 1
            and (not self.coupling or len(set(self.coupling)) == 1)
        )

    @classmethod
    def uniform(cls, n: int, tunneling: float, bias: float, coupling: float) -> "ChunkParams":
        """Fully symmetric parameters: same values on every qubit and pair."""
        return cls((tunneling,) * n, (bias,) * n, (coupling,) * (n * (n - 1) // 2))


@dataclass(frozen=True)
class Schedule:
    """Piecewise-constant parameter schedule over a fixed total time."""

    n_qubits: int
    total_time: float
    chunks: tuple[ChunkParams, ...]
    symmetric: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "chunks", tuple(self.chunks))
        if not self.chunks:
            raise ValueError("schedule needs at least one chunk")
        if self.total_time <= 0:
            raise ValueError("total_time must be positive")
        for ck in self.chunks:
            if ck.n_qubits != self.n_qubits:
                raise ValueError(f"chunk is sized for {ck.n_qubits} qubits, schedule for {self.n_qubits}")
        if self.symmetric and not all(ck.is_symmetric for ck in self.chunks):
            raise ValueError("symmetric schedule contains non-uniform chunk parameters")

    @property
    def n_chunks(self) -> int:
        return len(self.chunks)

    @property
    def dt(self) -> float:
        return self.total_time / len(self.chunks)


def build_hamiltonian(params: ChunkParams, n: int) -> np.ndarray:
    """Dense 2^n x 2^n Hamiltonian for one chunk's parameters."""
    if params.n_qubits != n:
        raise ValueError(f"parameters are sized for {params.n_qubits} qubits, not {n}")
    if not all(map(math.isfinite, params.tunneling + params.bias + params.coupling)):
        raise ValueError("Hamiltonian parameters must be finite")
    dim = 2**n
    h = np.zeros((dim, dim), dtype=complex)
    diag = np.zeros(dim)
    for q in range(n):
        h += params.tunneling[q] * _embedded_x(n, q)
        diag += params.bias[q] * z_diagonal(n, q)
    for idx, (i, j) in enumerate(qubit_pairs(n)):
        diag += params.coupling[idx] * z_diagonal(n, i) * z_diagonal(n, j)
    h[np.diag_indices(dim)] += diag
    return h


@lru_cache(maxsize=None)
def _embedded_x(n: int, q: int) -> np.ndarray:
    mats = [IDENTITY_2] * n
    mats[q] = PAULI_X
    out = reduce(np.kron, mats)
    out.flags.writeable = False
    return out


@lru_cache(maxsize=512)
def exact_chunk_propagator(params: ChunkParams, n: int, dt: float) -> np.ndarray:
    """``exp(-i H dt)`` by eigendecomposition of the Hermitian chunk Hamiltonian."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    h = build_hamiltonian(params, n)
    assert is_hermitian(h, tol=1e-12)
    eigvals, eigvecs = np.linalg.eigh(h)
    u = (eigvecs * np.exp(-1j * eigvals * dt)) @ eigvecs.conj().T
    u.flags.writeable = False
    return u


def _single_qubit_factor(tunneling: float, bias: float, dt: float) -> np.ndarray:
    """``exp(-i dt (K X + eps Z))`` in closed form."""
    magnitude = math.hypot(tunneling, bias)
    if magnitude == 0.0:
        return IDENTITY_2
    alpha = dt * magnitude
    generator = (tunneling * PAULI_X + bias * np.diag([1.0, -1.0])) / magnitude
    return math.cos(alpha) * IDENTITY_2 - 1j * math.sin(alpha) * generator


def _pair_phase_diagonal(params: ChunkParams, n: int, dt: float) -> np.ndarray:
    """Diagonal of the product of all ``exp(-i dt zeta_ij Z_i Z_j)`` factors."""
    zz = np.zeros(2**n)
    for idx, (i, j) in enumerate(qubit_pairs(n)):
        zz += params.coupling[idx] * z_diagonal(n, i) * z_diagonal(n, j)
    return np.exp(-1j * dt * zz)


def chunked_chunk_propagator(params: ChunkParams, n: int, dt: float) -> np.ndarray:
    """Split-operator propagator: pair exponentials first, then single-qubit ones."""
    if params.n_qubits != n:
        raise ValueError(f"parameters are sized for {params.n_qubits} qubits, not {n}")
    if dt <= 0:
        raise ValueError("dt must be positive")
    singles = [_single_qubit_factor(params.tunneling[q], params.bias[q], dt) for q in range(n)]
    u_single = reduce(np.kron, singles)
    return u_single * _pair_phase_diagonal(params, n, dt)[np.newaxis, :]


def chunk_propagators(schedule: Schedule, method: str = "exact") -> list[np.ndarray]:
    """Per-chunk dense unitaries in chronological order."""
    if method == "exact":
        return [exact_chunk_propagator(ck, schedule.n_qubits, schedule.dt) for ck in schedule.chunks]
    if method == "chunked":
        return [chunked_chunk_propagator(ck, schedule.n_qubits, schedule.dt) for ck in schedule.chunks]
    raise ValueError(f"unknown propagation method {method!r}")


def _evolve_tensor_chunked(tensor: np.ndarray, schedule: Schedule) -> np.ndarray:
    """Stream the chunked evolution over a [2]*n (+ batch axes) tensor."""
    n = schedule.n_qubits
    dt = schedule.dt
    dim = 2**n
    flat = tensor.reshape(dim, -1)
    for ck in schedule.chunks:
        flat = flat * _pair_phase_diagonal(ck, n, dt)[:, np.newaxis]
        t = flat.reshape([2] * n + [flat.shape[1]])
        for q in range(n):
            u = _single_qubit_factor(ck.tunneling[q], ck.bias[q], dt)
            t = np.moveaxis(np.tensordot(u, t, axes=([1], [q])), 0, q)
        flat = t.reshape(dim, -1)
    return flat.reshape(tensor.shape)


def evolve_states(states: np.ndarray, schedule: Schedule, method: str = "exact") -> np.ndarray:
    """Evolve a (dim,) state or a (batch, dim) stack of states.

    ``chunked`` streams diagonal phases and 2x2 updates without building
    any 2^N matrix; ``exact`` multiplies by cached dense chunk propagators.
    """
    arr = np.asarray(states, dtype=complex)
    single = arr.ndim == 1
    batch = arr[np.newaxis, :] if single else arr
    n = schedule.n_qubits
    if batch.shape[1] != 2**n:
        raise ValueError(f"state dimension {batch.shape[1]} does not match {n} qubits")
    if method == "chunked":
        tensor = batch.T.reshape([2] * n + [batch.shape[0]])
        out = _evolve_tensor_chunked(tensor, schedule).reshape(2**n, -1).T
    elif method == "exact":
        out = batch.T
        for u in chunk_propagators(schedule, "exact"):
            out = u @ out
        out = out.T
    else:
        raise ValueError(f"unknown propagation method {method!r}")
    return out[0] if single else out


def propagate(initial: np.ndarray, schedule: Schedule, method: str = "exact") -> np.ndarray:
    """Evolve a state vector or density matrix through the whole schedule."""
    arr = np.asarray(initial, dtype=complex)
    if arr.ndim == 1:
        return evolve_states(arr, schedule, method)
    if arr.ndim == 2 and arr.shape[0] == arr.shape[1]:
        rho = arr
        for u in chunk_propagators(schedule, method):
            rho = u @ rho @ u.conj().T
        return rho
    raise ValueError("expected a state vector or a square density matrix")


def refine_schedule(schedule: Schedule, factor: int) -> Schedule:
    """Split every chunk into ``factor`` equal chunks with identical parameters."""
    if factor < 1:
        raise ValueError("refinement factor must be >= 1")
    chunks = tuple(ck for ck in schedule.chunks for _ in range(factor))
    return Schedule(schedule.n_qubits, schedule.total_time, chunks, schedule.symmetric)


# --- JSON serialization -------------------------------------------------
#
# On-disk schema:
#   {"n_qubits": int, "total_time": float, "symmetric": bool,
#    "chunks": [{"K": [...], "eps": [...], "zeta": {"i,j": value}}]}

_SCHEDULE_KEYS = {"n_qubits", "total_time", "symmetric", "chunks"}
_CHUNK_KEYS = {"K", "eps", "zeta"}


class ScheduleFormatError(ValueError):
    """Raised when a schedule document violates the JSON schema."""


def schedule_to_json(schedule: Schedule) -> str:
    pairs = qubit_pairs(schedule.n_qubits)
    doc = {
        "n_qubits": schedule.n_qubits,
        "total_time": schedule.total_time,
        "symmetric": schedule.symmetric,
        "chunks": [
            {
                "K": list(ck.tunneling),
                "eps": list(ck.bias),
                "zeta": {f"{i},{j}": ck.coupling[idx] for idx, (i, j) in enumerate(pairs)},
            }
            for ck in schedule.chunks
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def schedule_from_json(text: str) -> Schedule:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScheduleFormatError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ScheduleFormatError("schedule document must be a JSON object")
    unknown = set(doc) - _SCHEDULE_KEYS
    if unknown:
        raise ScheduleFormatError(f"unknown key {sorted(unknown)[0]!r} in schedule document")
    missing = _SCHEDULE_KEYS - {"symmetric"} - set(doc)
    if missing:
        raise ScheduleFormatError(f"missing key {sorted(missing)[0]!r} in schedule document")
    n = doc["n_qubits"]
    if not isinstance(n, int) or n < 1:
        raise ScheduleFormatError("'n_qubits' must be a positive integer")
    pairs = qubit_pairs(n)
    chunks = []
    for pos, raw in enumerate(doc["chunks"]):
        if not isinstance(raw, dict):
            raise ScheduleFormatError(f"chunk {pos} must be a JSON object")
        unknown = set(raw) - _CHUNK_KEYS
        if unknown:
            raise ScheduleFormatError(f"unknown key {sorted(unknown)[0]!r} in chunk {pos}")
        missing = _CHUNK_KEYS - set(raw)
        if missing:
            raise ScheduleFormatError(f"missing key {sorted(missing)[0]!r} in chunk {pos}")
        zeta = raw["zeta"]
        if not isinstance(zeta, dict):
            raise ScheduleFormatError(f"'zeta' in chunk {pos} must be an object keyed by 'i,j'")
        coupling = []
        seen = set()
        for key, value in zeta.items():
            try:
                i, j = (int(part) for part in key.split(","))
            except ValueError as exc:
                raise ScheduleFormatError(f"bad zeta pair key {key!r} in chunk {pos}") from exc
            if not (0 <= i < j < n):
                raise ScheduleFormatError(f"zeta pair {key!r} out of range in chunk {pos}")
            seen.add((i, j))
        if seen != set(pairs):
            missing_pair = sorted(set(pairs) - seen)[0]
            raise ScheduleFormatError(f"zeta is missing pair '{missing_pair[0]},{missing_pair[1]}' in chunk {pos}")
        for i, j in pairs:
            coupling.append(float(zeta[f"{i},{j}"]))
        try:
            chunk = ChunkParams(tuple(raw["K"]), tuple(raw["eps"]), tuple(coupling))
        except (TypeError, ValueError) as exc:
            raise ScheduleFormatError(f"bad chunk {pos}: {exc}") from exc
        if chunk.n_qubits != n:
            raise ScheduleFormatError(f"chunk {pos} is sized for {chunk.n_qubits} qubits, document says {n}")
        chunks.append(chunk)
    try:
        return Schedule(
            n_qubits=n,
            total_time=float(doc["total_time"]),
            chunks=tuple(chunks),
            symmetric=bool(doc.get("symmetric", False)),
        )
    except (TypeError, ValueError) as exc:
        raise ScheduleFormatError(str(exc)) from exc


def load_schedule(path: str | Path) -> Schedule:
    return schedule_from_json(Path(path).read_text())


def save_schedule(schedule: Schedule, path: str | Path) -> None:
    Path(path).write_text(schedule_to_json(schedule))
