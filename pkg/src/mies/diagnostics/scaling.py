"""Hitting-time scaling across dimensions and a stagnation verdict for traces."""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field, asdict
from typing import Iterable

import numpy as np

from ..errors import ContractError
from ..strategies import RunTrace

STAGNATION_SLOPE = -1e-6
STAGNATION_LOG10_RATIO = 6.0


@dataclass
class ScalingReport:
    epsilon: float
    normalized: dict[int, float]  # dco -> mean T_eps / (dco ln(1/eps))
    counts: dict[int, int]
    censored: dict[int, int]
    max_min_ratio: float
    censored_flag: bool
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def hitting_time_fit(records: Iterable[tuple[int, int | None]], epsilon: float) -> ScalingReport:
    """Normalize hitting times by ``dco * ln(1/epsilon)`` and compare dimensions.

    ``records`` holds ``(dco, T_eps)`` pairs with ``None`` for runs that never
    reached ``epsilon``; those are excluded and counted as censored.
    """
    if not 0.0 < epsilon < 1.0:
        raise ContractError(f"epsilon must lie in (0, 1), got {epsilon!r}")
    scale = math.log(1.0 / epsilon)
    hits: dict[int, list[float]] = defaultdict(list)
    censored: dict[int, int] = {}
    for dco, t_eps in records:
        if t_eps is None:
            censored[int(dco)] = censored.get(int(dco), 0) + 1
        else:
            hits[int(dco)].append(t_eps / (dco * scale))
    dims = sorted(set(hits) | set(censored))
    if len(dims) < 3:
        raise ContractError(f"need at least 3 distinct dco values, got {dims}")
    normalized = {d: float(np.mean(hits[d])) for d in dims if hits[d]}
    notes = []
    if censored:
        notes.append(f"censored runs excluded: {dict(censored)}")
    missing = [d for d in dims if d not in normalized]
    if missing:
        notes.append(f"no hitting run for dco {missing}")
    vals = list(normalized.values())
    ratio = max(vals) / min(vals) if len(vals) >= 2 else math.nan
    return ScalingReport(
        epsilon=epsilon,
        normalized=normalized,
        counts={d: len(hits[d]) for d in dims},
        censored={d: censored.get(d, 0) for d in dims},
        max_min_ratio=ratio,
        censored_flag=bool(censored),
        notes=notes,
    )


@dataclass(frozen=True)
class StagnationVerdict:
    stagnated: bool
    tail_slope: float
    log_ratio_final: float
    window_fraction: float
    slope_threshold: float = STAGNATION_SLOPE
    ratio_threshold: float = STAGNATION_LOG10_RATIO

    def to_dict(self) -> dict:
        return asdict(self)


def tail_slope(values: np.ndarray, window_fraction: float) -> float:
    n = values.shape[0]
    w = max(2, int(math.ceil(window_fraction * n)))
    y = values[n - w:]
    if not np.all(np.isfinite(y)):
        return -math.inf
    x = np.arange(n - w, n, dtype=float)
    return float(np.polyfit(x, y, 1)[0])


def stagnation_detector(trace: RunTrace, window_fraction: float = 0.25) -> StagnationVerdict:
    """Flag a run whose distance stopped shrinking while sigma kept collapsing.

    Stagnated iff the least-squares slope of ``log10 ||m_t||`` over the last
    ``window_fraction`` of the trace is at least ``-1e-6`` per iteration and
    ``log10(||m|| / sigma) >= 6`` at the end.
    """
    if len(trace) < 100:
        raise ContractError(f"trace must have at least 100 rows, got {len(trace)}")
    if not 0.0 < window_fraction <= 1.0:
        raise ContractError("window_fraction must lie in (0, 1]")
    log10_m = trace.log10_norm_m
    slope = tail_slope(log10_m, window_fraction)
    final_ratio = float(log10_m[-1] - trace.log_sigma[-1] / math.log(10.0))
    stagnated = bool(slope >= STAGNATION_SLOPE and final_ratio >= STAGNATION_LOG10_RATIO)
    return StagnationVerdict(stagnated, slope, final_ratio, window_fraction)


def log_ratio_slope(trace: RunTrace) -> float:
    """Least-squares slope of ``ln(||m_t|| / sigma_t)`` over the whole trace."""
    y = trace.log_norm_m - trace.log_sigma
    ok = np.isfinite(y)
    if ok.sum() < 2:
        return math.nan
    return float(np.polyfit(trace.t[ok].astype(float), y[ok], 1)[0])
