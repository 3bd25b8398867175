"""Finite-shot simulation of the witness measurement.

A shot draws one computational basis state from the final state's
probabilities (inverse-CDF per shot) and contributes the pair parity
eigenvalue +-1; the witness estimate for a run of n shots is the squared
mean of those eigenvalues. Squaring makes the estimator biased upward by
``(1 - <ZZ>^2)/n``, which the statistics here expose rather than hide:
sweeps record the unsquared estimator's mean and variance alongside the
witness estimates.

Per-run randomness comes from Philox (counter-based) streams keyed on
(seed, shot_count, iteration), so any subset of the sweep grid can be
evaluated in any order, or in parallel, with identical results.

Confidence intervals cover the spread of single-experiment outcomes
(``mean +- z * sample std``), not the standard error of the grand mean;
the CSV carries both the std and the std/sqrt(iterations) so either
reading can be checked.
"""

from __future__ import annotations

import csv
import io
import statistics
from dataclasses import dataclass

import numpy as np

from .core import assert_normalized, n_qubits_of, z_diagonal
from .hamiltonian import Schedule
from .parallel import map_ordered
from .witness import PairStateKind, make_pair_state

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class ShotConfig:
    shot_counts: tuple[int, ...] = tuple(range(50, 20001, 50))
    iterations: int = 100
    confidence_level: float = 0.95
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "shot_counts", tuple(int(c) for c in self.shot_counts))
        if not self.shot_counts:
            raise ValueError("shot_counts must be nonempty")
        if any(c < 1 for c in self.shot_counts):
            raise ValueError("shot counts must be positive")
        if any(b <= a for a, b in zip(self.shot_counts, self.shot_counts[1:])):
            raise ValueError("shot_counts must be strictly increasing")
        if self.iterations < 1:
            raise ValueError("iterations must be positive")
        if not 0 < self.confidence_level < 1:
            raise ValueError("confidence_level must lie in (0, 1)")


@dataclass(frozen=True)
class ShotStatistics:
    """Per-shot-count ensemble statistics over the sweep iterations."""

    shot_counts: tuple[int, ...]
    mean: tuple[float, ...]            # mean witness estimate
    variance: tuple[float, ...]        # sample variance of witness estimates
    ci_half_width: tuple[float, ...]   # z * sample std of witness estimates
    std: tuple[float, ...]
    stderr: tuple[float, ...]          # std / sqrt(iterations)
    zz_mean: tuple[float, ...]         # mean of the unsquared estimator
    zz_variance: tuple[float, ...]
    iterations: int
    confidence_level: float
    seed: int

    @property
    def ci_low(self) -> tuple[float, ...]:
        return tuple(m - h for m, h in zip(self.mean, self.ci_half_width))

    @property
    def ci_high(self) -> tuple[float, ...]:
        return tuple(m + h for m, h in zip(self.mean, self.ci_half_width))


def z_score(level: float) -> float:
    """Two-sided normal quantile; z(0.95) = 1.959964."""
    if not 0 < level < 1:
        raise ValueError("confidence level must lie in (0, 1)")
    return statistics.NormalDist().inv_cdf(0.5 + level / 2.0)


def rng_stream(seed: int, shot_count: int, iteration: int) -> np.random.Generator:
    """Independent Philox stream for one (seed, shot_count, iteration) cell."""
    key = np.random.SeedSequence([seed & _MASK64, shot_count & _MASK64, iteration & _MASK64])
    return np.random.Generator(np.random.Philox(key))


def sample_zz_witness(
    final_state: np.ndarray, pair: tuple[int, int], n_shots: int, rng: np.random.Generator
) -> float:
    """Squared mean of n_shots sampled pair-parity eigenvalues."""
    zbar = sample_zz_mean(final_state, pair, n_shots, rng)
    return zbar * zbar


def sample_zz_mean(
    final_state: np.ndarray, pair: tuple[int, int], n_shots: int, rng: np.random.Generator
) -> float:
    """Unsquared estimator: mean parity over n_shots basis-state samples."""
    if n_shots < 1:
        raise ValueError("n_shots must be positive")
    assert_normalized(final_state)
    n = n_qubits_of(final_state)
    probs = np.abs(final_state) ** 2
    parity = z_diagonal(n, pair[0]) * z_diagonal(n, pair[1])
    cdf = np.cumsum(probs)
    cdf[-1] = 1.0  # guard the top edge against rounding
    draws = np.searchsorted(cdf, rng.random(n_shots), side="right")
    return float(np.mean(parity[draws]))


def confidence_interval(samples: list[float] | np.ndarray, level: float = 0.95) -> tuple[float, float]:
    """``mean +- z(level) * sample std`` over single-experiment outcomes."""
    samples = np.asarray(samples, dtype=float)
    if samples.size < 2:
        raise ValueError("confidence interval needs at least 2 samples")
    mean = float(np.mean(samples))
    half = z_score(level) * float(np.std(samples, ddof=1))
    return mean - half, mean + half


def sweep(
    schedule: Schedule,
    state_kind: PairStateKind,
    pair: tuple[int, int],
    config: ShotConfig,
) -> ShotStatistics:
    """Shot-count sweep of the witness estimator through the compiled circuit."""
    from .compiler import compile_schedule
    from .core import apply_circuit

    initial = make_pair_state(state_kind, pair, schedule.n_qubits)
    final = apply_circuit(initial, compile_schedule(schedule))
    z = z_score(config.confidence_level)

    def stats_for(count: int) -> tuple[float, ...]:
        zbars = np.array(
            [
                sample_zz_mean(final, pair, count, rng_stream(config.seed, count, it))
                for it in range(config.iterations)
            ]
        )
        estimates = zbars**2
        if config.iterations > 1:
            var = float(np.var(estimates, ddof=1))
            zz_var = float(np.var(zbars, ddof=1))
        else:
            var = zz_var = 0.0
        std = var**0.5
        return (
            float(np.mean(estimates)),
            var,
            z * std,
            std,
            std / config.iterations**0.5,
            float(np.mean(zbars)),
            zz_var,
        )

    rows = map_ordered(stats_for, config.shot_counts)
    cols = tuple(zip(*rows))
    return ShotStatistics(
        shot_counts=config.shot_counts,
        mean=cols[0],
        variance=cols[1],
        ci_half_width=cols[2],
        std=cols[3],
        stderr=cols[4],
        zz_mean=cols[5],
        zz_variance=cols[6],
        iterations=config.iterations,
        confidence_level=config.confidence_level,
        seed=config.seed,
    )


def sweep_csv(stats: ShotStatistics) -> str:
    """Plot-ready CSV; byte-stable for a given ShotStatistics."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["shot_count", "mean", "variance", "ci_low", "ci_high", "std", "stderr", "zz_mean", "zz_variance"])
    for idx, count in enumerate(stats.shot_counts):
        writer.writerow(
            [
                count,
                repr(stats.mean[idx]),
                repr(stats.variance[idx]),
                repr(stats.ci_low[idx]),
                repr(stats.ci_high[idx]),
                repr(stats.std[idx]),
                repr(stats.stderr[idx]),
                repr(stats.zz_mean[idx]),
                repr(stats.zz_variance[idx]),
            ]
        )
    return buf.getvalue()
