"""Block drift and variance estimators over independent replications."""

from __future__ import annotations

import math
from typing import Literal

import numpy as np

from ..errors import ContractError
from ..problems import ProblemSpec
from ..strategies import StrategyParams, StrategyState, _log_norm as _log_norm_vec, _step
from .potential import PotentialConfig, potential_value
from .success import DriftReport

Observable = Literal["log_sigma", "log_norm_m", "log_ratio", "truncated_V"]
OBSERVABLES = ("log_sigma", "log_norm_m", "log_ratio", "truncated_V")


def _log_norm(state: StrategyState) -> float:
    return _log_norm_vec(state.m, float(state.m @ state.m))


def block_drift_mc(template: StrategyState, params: StrategyParams, spec: ProblemSpec,
                   block_len: int, n_replications: int, seed: int,
                   observable: Observable = "log_norm_m",
                   potential: PotentialConfig | None = None,
                   truncation: float | None = None) -> DriftReport:
    """Mean change of ``observable`` over ``block_len`` steps from ``template``.

    Replication ``k`` draws its noise from the stream seeded by
    ``(seed, k)``, so any subset of replications can be recomputed
    independently; results are accumulated in replication order.

    For ``truncated_V`` each one-step potential change is clipped below at
    ``-truncation`` (defaulting to ``potential.truncation(params)``) and
    the clipped changes are summed over the block.
    """
    if block_len < 1 or n_replications < 1:
        raise ContractError("block_len and n_replications must be >= 1")
    if observable not in OBSERVABLES:
        raise ContractError(f"unknown observable {observable!r}")
    if template.m.shape != (spec.dco,) or template.m_int.shape != (spec.din,):
        raise ContractError("template dimensions do not match the problem")
    if observable == "truncated_V":
        if potential is None:
            raise ContractError("truncated_V needs a PotentialConfig")
        cut = potential.truncation(params) if truncation is None else float(truncation)

    width = spec.dco + spec.din
    start_norm = _log_norm(template)
    values = np.empty(n_replications)
    for k in range(n_replications):
        noise = np.random.default_rng([seed, k]).standard_normal((block_len, width))
        state = template
        if observable == "truncated_V":
            total = 0.0
            v_prev = potential_value(state, potential, params)
            for row in noise:
                state, _ = _step(state, params, spec, row[:spec.dco], row[spec.dco:])
                v_next = potential_value(state, potential, params)
                total += max(v_next - v_prev, -cut)
                v_prev = v_next
            values[k] = total
            continue
        for row in noise:
            state, _ = _step(state, params, spec, row[:spec.dco], row[spec.dco:])
        if observable == "log_sigma":
            values[k] = state.log_sigma - template.log_sigma
        elif observable == "log_norm_m":
            values[k] = _log_norm(state) - start_norm
        else:
            values[k] = (_log_norm(state) - state.log_sigma) - (start_norm - template.log_sigma)

    var = float(values.var(ddof=1)) if n_replications > 1 else 0.0
    return DriftReport(
        estimate=float(values.mean()),
        std_error=math.sqrt(var / n_replications),
        n_replications=n_replications,
        block_len=block_len,
        variance=var,
        observable=observable,
    )


def wallis(d: int) -> float:
    """``W_d = int_0^{pi/2} sin^d``, by ``W_d = (d-1)/d * W_{d-2}``."""
    if d < 0:
        raise ContractError(f"Wallis index must be nonnegative, got {d}")
    w = math.pi / 2.0 if d % 2 == 0 else 1.0
    for k in range(2 if d % 2 == 0 else 3, d + 1, 2):
        w *= (k - 1) / k
    return w


def variance_upper_bound(dco: int, s: float, alpha: float) -> float:
    """Bound on the variance of ``log(||m|| / sigma)`` after an ``s``-step block.

    Combines a Popoviciu bound on the step-size part with the squared
    log-progress bound on the mean part: ``(sqrt(V_m) + sqrt(V_sigma))^2``.
    The formula takes a real ``s``; the block length is ``s`` steps.
    """
    if dco < 2:
        raise ContractError(f"dco must be at least 2, got {dco}")
    v_sigma = 0.25 * (s * s * math.log(alpha) / (s - 1.0)) ** 2
    v_m = 2.0 * s * (dco - 1) * wallis(dco - 2) + s * (s - 1.0) / dco**2
    return (math.sqrt(v_m) + math.sqrt(v_sigma)) ** 2
