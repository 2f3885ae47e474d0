"""Random channel draws and per-realization data SNR."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .system import SystemParams, check_subarray_count

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class ChannelRealization:
    """Direct path ``p`` and the aggregate channel ``Z_n`` of each subarray."""

    direct: complex
    subarrays: np.ndarray

    @property
    def n_subarrays(self) -> int:
        return len(self.subarrays)

    def as_vector(self) -> np.ndarray:
        """``[p, Z_1, ..., Z_N]``, the coefficients probed by the pilots."""
        return np.concatenate(([self.direct], self.subarrays)).astype(np.complex128)

    @classmethod
    def from_vector(cls, h) -> ChannelRealization:
        h = np.asarray(h, dtype=np.complex128)
        return cls(complex(h[0]), h[1:].copy())


@dataclass(frozen=True)
class ElementChannels:
    """Per-element LoS phases and UE-element fading, shape ``(N, M // N)``."""

    phases: np.ndarray
    fading: np.ndarray


def complex_normal(rng: np.random.Generator, variance: float, size=None):
    """CN(0, variance): independent real/imag parts of variance ``variance / 2``."""
    scale = np.sqrt(variance / 2.0)
    draws = rng.standard_normal(size=(2,) if size is None else (2, *np.atleast_1d(size)))
    z = scale * (draws[0] + 1j * draws[1])
    return complex(z) if size is None else z


def sample_realization(params: SystemParams, n: int, rng: np.random.Generator) -> ChannelRealization:
    """Draw ``p ~ CN(0, rho)`` and ``Z_n ~ CN(0, alpha beta M / N)`` directly."""
    n = check_subarray_count(params.m_elements, n)
    direct = complex_normal(rng, params.rho)
    subarrays = complex_normal(rng, params.cascaded_gain / n, size=n)
    return ChannelRealization(direct, subarrays)


def sample_realization_elementwise(
    params: SystemParams, n: int, rng: np.random.Generator
) -> tuple[ChannelRealization, ElementChannels]:
    """Draw every element channel and aggregate each block of ``M // N`` elements."""
    n = check_subarray_count(params.m_elements, n)
    per_block = params.m_elements // n
    direct = complex_normal(rng, params.rho)
    phases = rng.uniform(0.0, TWO_PI, size=(n, per_block))
    fading = complex_normal(rng, params.beta, size=(n, per_block))
    elements = ElementChannels(phases, fading)
    return ChannelRealization(direct, aggregate(params, elements)), elements


def aggregate(params: SystemParams, elements: ElementChannels) -> np.ndarray:
    """Sum ``sqrt(alpha) exp(-j phi) b`` over the elements of each subarray."""
    return (np.sqrt(params.alpha) * np.exp(-1j * elements.phases) * elements.fading).sum(axis=1)


def _arg(z) -> np.ndarray:
    # arg(0) := 0 so a blocked direct path (p = 0, possibly -0.0) has a fixed reference
    z = np.asarray(z)
    return np.where(z == 0, 0.0, np.angle(z))


def optimal_phases(realization: ChannelRealization) -> np.ndarray:
    """Reflection phases ``arg(Z_n) - arg(p)`` wrapped into ``[0, 2 pi)``."""
    if realization.n_subarrays == 0:
        raise ValueError("realization has no subarrays")
    c = np.mod(_arg(realization.subarrays) - _arg(realization.direct), TWO_PI)
    return np.where(c >= TWO_PI, 0.0, c)


def instantaneous_snr(realization: ChannelRealization, phases, p_data: float, noise: float) -> float:
    phases = np.asarray(phases, dtype=float)
    if phases.shape != realization.subarrays.shape:
        raise ValueError(f"expected {realization.n_subarrays} phases, got {phases.shape}")
    g = realization.direct + np.sum(realization.subarrays * np.exp(-1j * phases))
    return p_data / noise * abs(g) ** 2


def max_snr(realization: ChannelRealization, p_data: float, noise: float) -> float:
    """SNR at the optimal configuration, ``(P/sigma^2)(|p| + sum |Z_n|)^2``."""
    amplitude = abs(realization.direct) + np.sum(np.abs(realization.subarrays))
    return p_data / noise * amplitude**2
