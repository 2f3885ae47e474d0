"""Closed-form average SNR, required powers and the energy objective.

All functions take ``n`` as a positive real so the optimizer can work on the
continuous relaxation; divisibility is enforced by the callers that need it.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .system import LinkBudget, SystemParams

QUARTER_PI = math.pi / 4.0


class SnrVariant(str, enum.Enum):
    EXACT = "exact"
    LOWER_BOUND = "lower_bound"


@dataclass(frozen=True)
class PowerAllocation:
    p_pilot: float
    p_data: float


def _positive_n(n) -> float:
    n = float(n)
    if not n > 0:
        raise ValueError(f"subarray count must be positive, got {n}")
    return n


def mean_gain(params: SystemParams, n, variant: SnrVariant = SnrVariant.EXACT) -> float:
    """Average of ``(|p| + sum |Z_n|)^2`` under the chosen variant (SNR per unit P/sigma^2)."""
    variant = SnrVariant(variant)
    n = _positive_n(n)
    k = params.cascaded_gain
    amplitude = math.sqrt(params.rho) + math.sqrt(k * n)
    value = QUARTER_PI * amplitude * amplitude
    if variant is SnrVariant.EXACT:
        value += (1.0 - QUARTER_PI) * (params.rho + k)
    return value


def _mean_gain_slope(params: SystemParams, n: float) -> float:
    # d/dN of the mean gain; identical for both variants
    k = params.cascaded_gain
    return QUARTER_PI * (math.sqrt(params.rho) + math.sqrt(k * n)) * math.sqrt(k) / math.sqrt(n)


def _mean_gain_curvature(params: SystemParams, n: float) -> float:
    return -0.5 * QUARTER_PI * math.sqrt(params.cascaded_gain * params.rho) * n**-1.5


def snr_lower_bound(params: SystemParams, n, p_data: float, noise: float) -> float:
    """Jensen bound on the average optimized SNR."""
    return p_data / noise * mean_gain(params, n, SnrVariant.LOWER_BOUND)


def snr_exact(params: SystemParams, n, p_data: float, noise: float) -> float:
    """Exact average optimized SNR: the bound plus an N-independent correction."""
    return p_data / noise * mean_gain(params, n, SnrVariant.EXACT)


def snr_average(params: SystemParams, n, p_data: float, noise: float, variant=SnrVariant.EXACT) -> float:
    return p_data / noise * mean_gain(params, n, variant)


def snr_baseline_individual(params: SystemParams, n, p_data: float, noise: float) -> float:
    """Average optimized SNR with ``n`` individually phased elements and the rest off."""
    n = _positive_n(n)
    ab = params.alpha * params.beta
    amplitude = math.sqrt(params.rho) + n * math.sqrt(ab)
    bracket = amplitude * amplitude + (4.0 / math.pi - 1.0) * (params.rho + ab * n)
    return QUARTER_PI * p_data / noise * bracket


def pilot_power(params: SystemParams, link: LinkBudget, n) -> float:
    """Pilot power giving RIS-path pilot SNR ``gamma_p`` after despreading N+1 pilots."""
    n = _positive_n(n)
    return link.noise_power * link.gamma_p / params.cascaded_gain * n / (n + 1.0)


def data_power(params: SystemParams, link: LinkBudget, n, variant=SnrVariant.EXACT) -> float:
    """Data power whose average SNR (under ``variant``) equals ``gamma_d``."""
    return link.noise_power * link.gamma_d / mean_gain(params, n, variant)


def power_allocation(params: SystemParams, link: LinkBudget, n, variant=SnrVariant.EXACT) -> PowerAllocation:
    return PowerAllocation(pilot_power(params, link, n), data_power(params, link, n, variant))


def energy(params: SystemParams, link: LinkBudget, n, variant=SnrVariant.EXACT) -> float:
    """UE energy for N+1 pilots and L data symbols, in joules."""
    n = _positive_n(n)
    b = link.symbol_rate
    data = link.payload_symbols / b * link.noise_power * link.gamma_d / mean_gain(params, n, variant)
    pilots = n / b * link.noise_power * link.gamma_p / params.cascaded_gain
    return data + pilots


def _pilot_slope(params: SystemParams, link: LinkBudget) -> float:
    return link.noise_power * link.gamma_p / (link.symbol_rate * params.cascaded_gain)


def _data_scale(link: LinkBudget) -> float:
    return link.noise_power * link.gamma_d * link.payload_symbols / link.symbol_rate


def energy_derivative(params: SystemParams, link: LinkBudget, n, variant=SnrVariant.EXACT) -> float:
    """dE/dN on the continuous relaxation."""
    variant = SnrVariant(variant)
    n = _positive_n(n)
    k = params.cascaded_gain
    if variant is SnrVariant.LOWER_BOUND:
        s = math.sqrt(params.rho) + math.sqrt(k * n)
        return _pilot_slope(params, link) - _data_scale(link) * math.sqrt(k) / (QUARTER_PI * s**3 * math.sqrt(n))
    d = mean_gain(params, n, variant)
    return _pilot_slope(params, link) - _data_scale(link) * _mean_gain_slope(params, n) / (d * d)


def energy_second_derivative(params: SystemParams, link: LinkBudget, n, variant=SnrVariant.EXACT) -> float:
    """d^2E/dN^2 on the continuous relaxation (positive for every N > 0)."""
    variant = SnrVariant(variant)
    n = _positive_n(n)
    k = params.cascaded_gain
    if variant is SnrVariant.LOWER_BOUND:
        s = math.sqrt(params.rho) + math.sqrt(k * n)
        num = math.sqrt(k) * (math.sqrt(params.rho) + 4.0 * math.sqrt(k * n))
        return _data_scale(link) * num / (0.5 * math.pi * s**4 * n**1.5)
    d = mean_gain(params, n, variant)
    d1 = _mean_gain_slope(params, n)
    d2 = _mean_gain_curvature(params, n)
    return _data_scale(link) * (2.0 * d1 * d1 / d**3 - d2 / d**2)
