"""Subarray sizing for RIS-assisted single-antenna uplinks.

Closed-form and Monte Carlo average SNR, pilot-based channel estimation and
the subarray count that minimizes UE energy for a finite payload.
"""
from .channel import (
    ChannelRealization,
    ElementChannels,
    instantaneous_snr,
    max_snr,
    optimal_phases,
    sample_realization,
    sample_realization_elementwise,
)
from .kernels import BACKEND
from .montecarlo import McEstimate, compare, mc_mean_baseline_snr, mc_mean_max_snr
from .optimizer import (
    OptimizationResult,
    Regime,
    brute_force_optimum,
    classify_regime,
    continuous_optimum,
    optimize_subarrays,
)
from .pilots import csi_loss, estimate_channel, pilot_matrix, pilot_snr, simulate_pilot_rx
from .snr import (
    PowerAllocation,
    SnrVariant,
    data_power,
    energy,
    energy_derivative,
    energy_second_derivative,
    pilot_power,
    snr_baseline_individual,
    snr_exact,
    snr_lower_bound,
)
from .system import (
    LinkBudget,
    SystemParams,
    ValidationError,
    db_to_linear,
    feasible_subarray_counts,
    linear_to_db,
    validate,
)

__version__ = "0.1.0"
