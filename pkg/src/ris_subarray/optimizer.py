"""Energy-minimizing subarray count.

The relaxed objective is convex in N, so the sign of dE/dN at the two
endpoints decides where the minimum lies. For an interior minimum the root of
dE/dN is found by bisection and the answer is snapped to the neighbouring
divisors of M.
"""
from __future__ import annotations

import bisect
import enum
import math
from dataclasses import dataclass, field

from .snr import SnrVariant, energy, energy_derivative
from .system import LinkBudget, SystemParams, feasible_subarray_counts

MAX_ITERATIONS = 200
RELATIVE_WIDTH = 1e-9


class Regime(str, enum.Enum):
    INTERIOR = "interior"
    ALL_INDIVIDUAL = "all_individual"
    SINGLE_SUBARRAY = "single_subarray"


@dataclass
class OptimizationResult:
    regime: Regime
    n_optimal: int
    energy_at_optimum: float
    variant: SnrVariant
    n_continuous: float | None = None
    energy_curve: dict[int, float] = field(default_factory=dict)
    candidates: tuple[int, ...] = ()

    def to_dict(self) -> dict:
        return {
            "regime": self.regime.value,
            "variant": self.variant.value,
            "n_continuous": self.n_continuous,
            "n_optimal": self.n_optimal,
            "candidates": list(self.candidates),
            "energy_at_optimum": self.energy_at_optimum,
            "energy_curve": {str(n): e for n, e in self.energy_curve.items()},
        }


def classify_regime(params: SystemParams, link: LinkBudget, variant=SnrVariant.EXACT) -> Regime:
    """Locate the minimum from the endpoint slopes.

    A zero slope at N=1 counts as single_subarray and a zero slope at N=M as
    all_individual; convexity makes the endpoint a minimizer in both cases.
    """
    if energy_derivative(params, link, 1, variant) >= 0:
        return Regime.SINGLE_SUBARRAY
    if energy_derivative(params, link, params.m_elements, variant) <= 0:
        return Regime.ALL_INDIVIDUAL
    return Regime.INTERIOR


def closed_form_conditions(params: SystemParams, link: LinkBudget) -> tuple[bool, bool]:
    """Lower-bound closed forms for ``(dE/dN(1) < 0, dE/dN(M) > 0)``."""
    m = params.m_elements
    ratio = math.sqrt(params.rho / params.cascaded_gain)
    base = 4.0 * link.gamma_d * link.payload_symbols / (math.pi * link.gamma_p)
    falls_at_one = ratio < base ** (1.0 / 3.0) - 1.0
    rises_at_m = ratio > (base / math.sqrt(m)) ** (1.0 / 3.0) - math.sqrt(m)
    return falls_at_one, rises_at_m


def continuous_optimum(params: SystemParams, link: LinkBudget, variant=SnrVariant.EXACT) -> float:
    """Root of dE/dN in (1, M) by bisection; only defined for the interior regime."""
    regime = classify_regime(params, link, variant)
    if regime is not Regime.INTERIOR:
        raise ValueError(f"no interior optimum: regime is {regime.value}")
    lo, hi = 1.0, float(params.m_elements)
    tol = RELATIVE_WIDTH * params.m_elements
    for _ in range(MAX_ITERATIONS):
        if hi - lo < tol:
            break
        mid = 0.5 * (lo + hi)
        slope = energy_derivative(params, link, mid, variant)
        if slope == 0:
            return mid
        if slope < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def neighbouring_divisors(divisors: list[int], x: float) -> tuple[int, ...]:
    """Largest divisor <= x and smallest divisor >= x (one value if x is a divisor)."""
    i = bisect.bisect_left(divisors, x)
    if i < len(divisors) and divisors[i] == x:
        return (divisors[i],)
    return (divisors[i - 1], divisors[i])


def _curve(params, link, variant, divisors):
    return {n: energy(params, link, n, variant) for n in divisors}


def optimize_subarrays(params: SystemParams, link: LinkBudget, variant=SnrVariant.EXACT) -> OptimizationResult:
    variant = SnrVariant(variant)
    divisors = feasible_subarray_counts(params.m_elements)
    curve = _curve(params, link, variant, divisors)
    regime = classify_regime(params, link, variant)
    n_star = None
    if regime is Regime.SINGLE_SUBARRAY:
        candidates = (1,)
    elif regime is Regime.ALL_INDIVIDUAL:
        candidates = (params.m_elements,)
    else:
        n_star = continuous_optimum(params, link, variant)
        candidates = neighbouring_divisors(divisors, n_star)
    # min() keeps the first of equal values, i.e. the smaller N
    best = min(candidates, key=lambda n: curve[n])
    return OptimizationResult(regime, best, curve[best], variant, n_star, curve, candidates)


def brute_force_optimum(params: SystemParams, link: LinkBudget, variant=SnrVariant.EXACT) -> OptimizationResult:
    """Evaluate E at every divisor of M; ties go to the smaller N."""
    variant = SnrVariant(variant)
    divisors = feasible_subarray_counts(params.m_elements)
    curve = _curve(params, link, variant, divisors)
    best = min(divisors, key=lambda n: curve[n])
    regime = classify_regime(params, link, variant)
    return OptimizationResult(regime, best, curve[best], variant, None, curve, tuple(divisors))
