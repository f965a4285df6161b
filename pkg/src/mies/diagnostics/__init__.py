"""Computable theory layer: success probabilities, potential, drift, scaling."""

from .drift import OBSERVABLES, block_drift_mc, variance_upper_bound, wallis
from .noncentral import log_improvement_mc, ncx2_pdf, truncated_log_improvement_oracle
from .potential import (
    DriftBoundConfig,
    DriftBounds,
    PotentialConfig,
    calibrate,
    drift_bound_b,
    gamma_exponent,
    p_succ_in_lb,
    potential_value,
    linear_convergence_config,
)
from .scaling import (
    ScalingReport,
    StagnationVerdict,
    hitting_time_fit,
    log_ratio_slope,
    stagnation_detector,
)
from .success import (
    ContinuousSuccessSampler,
    DriftReport,
    p_succ_co_mc,
    p_succ_in,
    p_succ_in_mc,
)

__all__ = [
    "OBSERVABLES",
    "ContinuousSuccessSampler",
    "DriftBoundConfig",
    "DriftBounds",
    "DriftReport",
    "PotentialConfig",
    "ScalingReport",
    "StagnationVerdict",
    "block_drift_mc",
    "calibrate",
    "drift_bound_b",
    "gamma_exponent",
    "hitting_time_fit",
    "log_improvement_mc",
    "log_ratio_slope",
    "ncx2_pdf",
    "p_succ_co_mc",
    "p_succ_in",
    "p_succ_in_lb",
    "p_succ_in_mc",
    "potential_value",
    "stagnation_detector",
    "linear_convergence_config",
    "truncated_log_improvement_oracle",
    "variance_upper_bound",
    "wallis",
]
