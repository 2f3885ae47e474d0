"""Reproducible Monte Carlo estimates of the average optimized SNR.

Trials are cut into fixed blocks of ``BLOCK_TRIALS`` regardless of the worker
count, each block draws from its own trial-keyed substreams, and the per-trial
values are reduced in trial order. The output is therefore byte-identical for
any number of threads.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import kernels
from .system import SystemParams, check_subarray_count

DEFAULT_TRIALS = 15_000
CI_MULTIPLIER = 3.0
BLOCK_TRIALS = 1024

# stream ids keep the estimators statistically independent for a shared seed
STREAM_SUBARRAY = 1
STREAM_BASELINE = 2
STREAM_CSI = 1000


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    trials: int
    seed: int

    @classmethod
    def from_samples(cls, samples: np.ndarray, seed: int) -> McEstimate:
        samples = np.asarray(samples, dtype=np.float64)
        trials = samples.size
        mean = float(np.sum(samples) / trials)
        if trials < 2:
            return cls(mean, math.nan, trials, seed)
        var = float(np.sum((samples - mean) ** 2) / (trials - 1))
        return cls(mean, math.sqrt(var / trials), trials, seed)


@dataclass(frozen=True)
class Comparison:
    passed: bool
    analytic: float
    mean: float
    abs_error: float
    rel_margin: float  # rel_tol * |analytic|
    se_margin: float  # CI_MULTIPLIER * std_error

    @property
    def rel_error(self) -> float:
        return self.abs_error / abs(self.analytic) if self.analytic else math.inf

    def __str__(self):
        verdict = "PASS" if self.passed else "FAIL"
        return (
            f"{verdict}: analytic={self.analytic:.6g} mc={self.mean:.6g} "
            f"|diff|={self.abs_error:.3g} (rel {self.rel_error:.3%}) "
            f"rel_margin={self.rel_margin:.3g} se_margin={self.se_margin:.3g}"
        )


def run_trials(
    block_fn: Callable[[np.ndarray], np.ndarray],
    trials: int,
    workers: int = 1,
    block: int = BLOCK_TRIALS,
) -> np.ndarray:
    """Evaluate ``block_fn`` on consecutive trial-index blocks and concatenate.

    ``block_fn`` maps an array of trial indices to per-trial values and must
    depend only on those indices.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    starts = range(0, trials, block)
    chunks = [np.arange(s, min(s + block, trials), dtype=np.uint64) for s in starts]
    if workers <= 1 or len(chunks) == 1:
        parts = [block_fn(c) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(block_fn, chunks))
    return np.concatenate(parts)


def _check_trials(trials: int) -> None:
    if trials < 2:
        raise ValueError("at least 2 trials are needed for a standard error")


def max_snr_samples(
    params: SystemParams, n: int, p_data: float, noise: float, trials: int, seed: int, workers: int = 1
) -> np.ndarray:
    """Per-trial optimized SNR with N subarrays (variance alpha beta M / N each)."""
    n = check_subarray_count(params.m_elements, n)
    path_var = params.cascaded_gain / n

    def block(idx):
        keys = kernels.trial_keys(seed, STREAM_SUBARRAY, idx)
        return kernels.max_snr_batch(keys, params.rho, path_var, n)

    return p_data / noise * run_trials(block, trials, workers)


def baseline_snr_samples(
    params: SystemParams, n: int, p_data: float, noise: float, trials: int, seed: int, workers: int = 1
) -> np.ndarray:
    """Per-trial optimized SNR with N single elements (variance alpha beta) and M - N off."""
    if not 1 <= n <= params.m_elements:
        raise ValueError(f"need 1 <= n <= M, got {n}")
    element_var = params.alpha * params.beta

    def block(idx):
        keys = kernels.trial_keys(seed, STREAM_BASELINE, idx)
        return kernels.max_snr_batch(keys, params.rho, element_var, n)

    return p_data / noise * run_trials(block, trials, workers)


def mc_mean_max_snr(
    params: SystemParams,
    n: int,
    p_data: float,
    noise: float,
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
    workers: int = 1,
) -> McEstimate:
    _check_trials(trials)
    return McEstimate.from_samples(max_snr_samples(params, n, p_data, noise, trials, seed, workers), seed)


def mc_mean_baseline_snr(
    params: SystemParams,
    n: int,
    p_data: float,
    noise: float,
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
    workers: int = 1,
) -> McEstimate:
    _check_trials(trials)
    return McEstimate.from_samples(baseline_snr_samples(params, n, p_data, noise, trials, seed, workers), seed)


def compare(analytic: float, estimate: McEstimate, rel_tol: float) -> Comparison:
    """Pass iff ``|analytic - mean| <= max(rel_tol * |analytic|, 3 * std_error)``."""
    if not rel_tol > 0:
        raise ValueError("rel_tol must be positive")
    diff = abs(analytic - estimate.mean)
    rel_margin = rel_tol * abs(analytic)
    se_margin = CI_MULTIPLIER * estimate.std_error
    return Comparison(diff <= max(rel_margin, se_margin), analytic, estimate.mean, diff, rel_margin, se_margin)
