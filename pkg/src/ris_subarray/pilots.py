"""Pilot phase: DFT training matrix, least-squares estimate and CSI loss."""
from __future__ import annotations

import math

import numpy as np

from . import kernels
from .channel import ChannelRealization, complex_normal
from .montecarlo import DEFAULT_TRIALS, STREAM_CSI, McEstimate, run_trials
from .system import SystemParams, check_subarray_count


def pilot_matrix(n: int) -> np.ndarray:
    """(N+1)-point DFT matrix, entry (r, c) = exp(-2j pi r c / (N+1)).

    Row 0 and column 0 are all ones, and ``Psi^H Psi = (N+1) I``.
    """
    if n < 1:
        raise ValueError("need at least one subarray")
    size = n + 1
    rc = np.outer(np.arange(size), np.arange(size)) % size
    return np.exp(-2j * np.pi * rc / size)


def simulate_pilot_rx(
    realization: ChannelRealization,
    psi: np.ndarray,
    p_pilot: float,
    noise: float,
    rng: np.random.Generator,
) -> np.ndarray:
    """Received pilot block ``sqrt(P) Psi h + w`` with ``w ~ CN(0, noise I)``."""
    h = realization.as_vector()
    if psi.shape != (h.size, h.size):
        raise ValueError(f"pilot matrix {psi.shape} does not match {h.size} channel coefficients")
    w = complex_normal(rng, noise, size=h.size) if noise > 0 else np.zeros(h.size, dtype=complex)
    return math.sqrt(p_pilot) * (psi @ h) + w


def estimate_channel(y: np.ndarray, psi: np.ndarray, p_pilot: float) -> ChannelRealization:
    """Least-squares estimate ``Psi^H y / ((N+1) sqrt(P))``, as ``[p_hat, Z_hat...]``."""
    if not p_pilot > 0:
        raise ValueError("pilot power must be positive")
    y = np.asarray(y, dtype=np.complex128)
    size = psi.shape[0]
    return ChannelRealization.from_vector(psi.conj().T @ y / (size * math.sqrt(p_pilot)))


def pilot_snr(params: SystemParams, n, p_pilot: float, noise: float) -> tuple[float, float]:
    """Post-despreading pilot SNR of the direct path and of each RIS path."""
    n = float(n)
    gain = (n + 1.0) * p_pilot / noise
    return gain * params.rho, gain * params.cascaded_gain / n


def pilot_power_for_snr(params: SystemParams, n, gamma: float, noise: float = 1.0) -> float:
    """Pilot power that puts the RIS-path pilot SNR at ``gamma``."""
    n = float(n)
    return gamma * noise * n / ((n + 1.0) * params.cascaded_gain)


def _phase(z: np.ndarray) -> np.ndarray:
    return np.where(z == 0, 0.0, np.angle(z))


def _csi_ratios(params: SystemParams, n: int, gamma: float, keys: np.ndarray) -> np.ndarray:
    size = n + 1
    h = np.empty((keys.size, size), dtype=np.complex128)
    h[:, :1] = kernels.complex_normal_batch(keys, 0, 1, params.rho)
    h[:, 1:] = kernels.complex_normal_batch(keys, 2, n, params.cascaded_gain / n)
    # Psi h is the forward FFT and Psi^H y / (N+1) the inverse FFT for the DFT pilot matrix
    if math.isinf(gamma):
        h_hat = np.fft.ifft(np.fft.fft(h, axis=1), axis=1)
    else:
        amp = math.sqrt(pilot_power_for_snr(params, n, gamma))
        w = kernels.complex_normal_batch(keys, 2 * size, size, 1.0)
        h_hat = np.fft.ifft(amp * np.fft.fft(h, axis=1) + w, axis=1) / amp
    rotation = np.exp(-1j * (_phase(h_hat[:, 1:]) - _phase(h_hat[:, :1])))
    achieved = np.abs(h[:, 0] + np.sum(h[:, 1:] * rotation, axis=1)) ** 2
    best = (np.abs(h[:, 0]) + np.sum(np.abs(h[:, 1:]), axis=1)) ** 2
    return achieved / best


def csi_loss(
    params: SystemParams,
    n: int,
    gamma_p_grid,
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
    workers: int = 1,
) -> list[McEstimate]:
    """Mean ratio of achieved to maximal data SNR with estimated phases.

    For each pilot SNR in ``gamma_p_grid`` (linear; ``inf`` means noiseless
    pilots) the pilot power is set so the RIS-path pilot SNR equals it. Each
    grid point uses its own substreams.
    """
    n = check_subarray_count(params.m_elements, n)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    block = max(1, 131072 // (n + 1))
    out = []
    for i, gamma in enumerate(gamma_p_grid):
        gamma = float(gamma)
        if not gamma > 0:
            raise ValueError(f"pilot SNR must be positive, got {gamma}")

        def block_fn(idx, gamma=gamma, stream=STREAM_CSI + i):
            return _csi_ratios(params, n, gamma, kernels.trial_keys(seed, stream, idx))

        out.append(McEstimate.from_samples(run_trials(block_fn, trials, workers, block=block), seed))
    return out
