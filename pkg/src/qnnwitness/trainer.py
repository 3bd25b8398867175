"""Gradient-descent training of schedules and bootstrapping across sizes.

The loss is the summed squared witness error over a training set, with
gradients by central finite differences, one coordinate at a time. With
the symmetric constraint (the default) each chunk contributes three free
parameters: shared tunneling, shared bias, shared coupling. Updates act
on those shared parameters directly, so symmetry is preserved exactly.

Bootstrapping seeds the n-qubit optimization with the (n-1)-qubit
solution; with all-to-all coupling the required correction shrinks as n
grows, which is what makes the chain 2 -> 7 cheap.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .hamiltonian import ChunkParams, Schedule
from .parallel import map_ordered
from .witness import TrainingSet, build_training_set, witness_values

DEFAULT_TOTAL_TIME = 1.58


@dataclass(frozen=True)
class TrainerConfig:
    learning_rate: float = 0.05
    momentum: float = 0.9
    max_epochs: int = 2000
    target_rms: float = 1e-3
    gradient_step: float = 1e-5
    symmetric: bool = True
    chunk_count: int = 4
    seed: int = 0
    method: str = "chunked"

    def __post_init__(self) -> None:
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.max_epochs < 0:
            raise ValueError("max_epochs must be non-negative")
        if self.gradient_step <= 0:
            raise ValueError("gradient_step must be positive")
        if self.chunk_count < 1:
            raise ValueError("chunk_count must be positive")
        if not 0 <= self.momentum < 1:
            raise ValueError("momentum must lie in [0, 1)")


@dataclass(frozen=True)
class TrainResult:
    schedule: Schedule
    rms_history: tuple[float, ...]  # rms before any step, then after each epoch
    epochs_used: int
    converged: bool

    @property
    def final_rms(self) -> float:
        return self.rms_history[-1]


class TrainingDiverged(RuntimeError):
    """Loss blew past the divergence guard; carries the best schedule seen."""

    def __init__(self, message: str, last_good: Schedule, rms_history: tuple[float, ...]):
        super().__init__(message)
        self.last_good = last_good
        self.rms_history = rms_history


def rms_error(schedule: Schedule, training_set: TrainingSet, method: str = "chunked") -> float:
    """Root mean squared witness error over the training set."""
    if len(training_set.items) == 0:
        raise ValueError("training set is empty")
    values = witness_values(training_set, schedule, method)
    targets = np.array([item.target for item in training_set.items])
    return float(np.sqrt(np.mean((values - targets) ** 2)))


def training_loss(schedule: Schedule, training_set: TrainingSet, method: str = "chunked") -> float:
    """Summed squared witness error (the quantity the gradient differentiates)."""
    values = witness_values(training_set, schedule, method)
    targets = np.array([item.target for item in training_set.items])
    return float(np.sum((values - targets) ** 2))


# --- flat parameter vector <-> schedule ---------------------------------
#
# Symmetric layout: (tunneling, bias, coupling) per chunk, chunk-major.
# Full layout: per chunk, n tunnelings, n biases, C(n,2) couplings.


def schedule_parameters(schedule: Schedule, symmetric: bool | None = None) -> np.ndarray:
    if symmetric is None:
        symmetric = schedule.symmetric
    out: list[float] = []
    for ck in schedule.chunks:
        if symmetric:
            if not ck.is_symmetric:
                raise ValueError("cannot extract shared parameters from a non-symmetric chunk")
            out.extend((ck.tunneling[0], ck.bias[0], ck.coupling[0] if ck.coupling else 0.0))
        else:
            out.extend(ck.tunneling)
            out.extend(ck.bias)
            out.extend(ck.coupling)
    return np.array(out)


def schedule_with_parameters(
    template: Schedule, params: np.ndarray, symmetric: bool | None = None
) -> Schedule:
    if symmetric is None:
        symmetric = template.symmetric
    n = template.n_qubits
    n_pairs = n * (n - 1) // 2
    per_chunk = 3 if symmetric else 2 * n + n_pairs
    if len(params) != per_chunk * template.n_chunks:
        raise ValueError(f"expected {per_chunk * template.n_chunks} parameters, got {len(params)}")
    chunks = []
    pos = 0
    for _ in range(template.n_chunks):
        if symmetric:
            k, e, z = params[pos : pos + 3]
            chunks.append(ChunkParams.uniform(n, float(k), float(e), float(z)))
            pos += 3
        else:
            k = tuple(float(x) for x in params[pos : pos + n])
            e = tuple(float(x) for x in params[pos + n : pos + 2 * n])
            z = tuple(float(x) for x in params[pos + 2 * n : pos + 2 * n + n_pairs])
            chunks.append(ChunkParams(k, e, z))
            pos += per_chunk
    return Schedule(n, template.total_time, tuple(chunks), symmetric)


def gradient(schedule: Schedule, training_set: TrainingSet, config: TrainerConfig) -> np.ndarray:
    """Central-difference gradient of the summed squared error."""
    base = schedule_parameters(schedule, config.symmetric)
    h = config.gradient_step

    def partial(index: int) -> float:
        plus, minus = base.copy(), base.copy()
        plus[index] += h
        minus[index] -= h
        loss_plus = training_loss(schedule_with_parameters(schedule, plus, config.symmetric), training_set, config.method)
        loss_minus = training_loss(schedule_with_parameters(schedule, minus, config.symmetric), training_set, config.method)
        return (loss_plus - loss_minus) / (2.0 * h)

    grad = np.array(map_ordered(partial, range(len(base))))
    if not np.all(np.isfinite(grad)):
        raise ValueError("non-finite loss encountered during gradient evaluation")
    return grad


_DIVERGENCE_FACTOR = 10.0
_DIVERGENCE_PATIENCE = 50


def train(init: Schedule, training_set: TrainingSet, config: TrainerConfig) -> TrainResult:
    """Plain gradient descent with momentum until target_rms or max_epochs.

    Deterministic for fixed inputs. Raises :class:`TrainingDiverged` when
    the rms exceeds 10x its initial value for 50 consecutive epochs.
    """
    params = schedule_parameters(init, config.symmetric)
    velocity = np.zeros_like(params)
    schedule = schedule_with_parameters(init, params, config.symmetric)
    rms = rms_error(schedule, training_set, config.method)
    history = [rms]
    best_schedule, best_rms = schedule, rms
    if rms <= config.target_rms:
        return TrainResult(schedule, tuple(history), 0, True)
    initial_rms = rms
    bad_streak = 0
    epochs = 0
    for _ in range(config.max_epochs):
        grad = gradient(schedule, training_set, config)
        velocity = config.momentum * velocity - config.learning_rate * grad
        params = params + velocity
        schedule = schedule_with_parameters(init, params, config.symmetric)
        rms = rms_error(schedule, training_set, config.method)
        history.append(rms)
        epochs += 1
        if rms < best_rms:
            best_schedule, best_rms = schedule, rms
        if rms > _DIVERGENCE_FACTOR * initial_rms:
            bad_streak += 1
            if bad_streak >= _DIVERGENCE_PATIENCE:
                raise TrainingDiverged(
                    f"rms {rms:.3e} exceeded 10x the initial {initial_rms:.3e} "
                    f"for {bad_streak} consecutive epochs (epoch {epochs})",
                    last_good=best_schedule,
                    rms_history=tuple(history),
                )
        else:
            bad_streak = 0
        if rms <= config.target_rms:
            return TrainResult(schedule, tuple(history), epochs, True)
    return TrainResult(schedule, tuple(history), epochs, False)


def random_schedule(
    n: int,
    chunk_count: int,
    seed: int,
    total_time: float = DEFAULT_TOTAL_TIME,
    symmetric: bool = True,
) -> Schedule:
    """Documented random initialization: tunneling ~ U(2.4, 2.6), bias and
    coupling ~ U(-0.1, 0.1), drawn per chunk (shared across qubits when
    symmetric)."""
    rng = np.random.default_rng(seed)
    chunks = []
    n_pairs = n * (n - 1) // 2
    for _ in range(chunk_count):
        if symmetric:
            chunks.append(
                ChunkParams.uniform(
                    n,
                    2.5 + rng.uniform(-0.1, 0.1),
                    rng.uniform(-0.1, 0.1),
                    rng.uniform(-0.1, 0.1),
                )
            )
        else:
            chunks.append(
                ChunkParams(
                    tuple(2.5 + rng.uniform(-0.1, 0.1) for _ in range(n)),
                    tuple(rng.uniform(-0.1, 0.1) for _ in range(n)),
                    tuple(rng.uniform(-0.1, 0.1) for _ in range(n_pairs)),
                )
            )
    return Schedule(n, total_time, tuple(chunks), symmetric)


def bootstrap(prev: TrainResult, n: int, config: TrainerConfig) -> TrainResult:
    """Train the n-qubit witness starting from the (n-1)-qubit solution."""
    source = prev.schedule
    if not source.symmetric:
        raise ValueError("bootstrapping requires a symmetric source schedule")
    if n <= source.n_qubits:
        raise ValueError(f"bootstrap target {n} must exceed the source size {source.n_qubits}")
    chunks = tuple(
        ChunkParams.uniform(n, ck.tunneling[0], ck.bias[0], ck.coupling[0] if ck.coupling else 0.0)
        for ck in source.chunks
    )
    init = Schedule(n, source.total_time, chunks, symmetric=True)
    return train(init, build_training_set(n), config)


def bootstrap_chain(n_max: int, config: TrainerConfig) -> dict[int, TrainResult]:
    """Random-init train at n=2, then bootstrap one qubit at a time to n_max."""
    if n_max < 2:
        raise ValueError("chain needs n_max >= 2")
    results: dict[int, TrainResult] = {}
    init = random_schedule(2, config.chunk_count, config.seed, symmetric=config.symmetric)
    results[2] = train(init, build_training_set(2), config)
    for n in range(3, n_max + 1):
        results[n] = bootstrap(results[n - 1], n, config)
    return results


def rms_history_csv(result: TrainResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["epoch", "rms"])
    for epoch, rms in enumerate(result.rms_history):
        writer.writerow([epoch, repr(rms)])
    return buf.getvalue()


def bootstrap_summary_csv(results: dict[int, TrainResult]) -> str:
    """One row per system size: parameters per chunk, epochs, final rms."""
    sizes = sorted(results)
    n_chunks = results[sizes[0]].schedule.n_chunks
    header = ["n_qubits", "epochs", "rms"]
    for k in range(n_chunks):
        header += [f"K_{k}", f"eps_{k}", f"zeta_{k}"]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for n in sizes:
        res = results[n]
        row: list = [n, res.epochs_used, repr(res.final_rms)]
        for ck in res.schedule.chunks:
            row += [repr(ck.tunneling[0]), repr(ck.bias[0]), repr(ck.coupling[0] if ck.coupling else 0.0)]
        writer.writerow(row)
    return buf.getvalue()
