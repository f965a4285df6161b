"""Elitist (1+1) evolution strategies with a margin on integer coordinates.

Two variants share one step routine:

* ``LB``  keeps ``sigma * <D>_i >= sigma_lb`` after every update.
* ``LUB`` additionally stops ``sigma * <D>_i`` from growing on coordinates
  that did not take part in a successful integer mutation.

The step-size lives in the log domain.  The per-coordinate integer standard
deviation ``sigma * <D>_i`` is stored directly as ``sigma_d``; ``<D>_i`` itself
is derived on demand.  Both choices keep long premature-convergence runs, where
``sigma`` shrinks by hundreds of orders of magnitude, free of underflow.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ContractError
from .problems import ProblemSpec, no_worse_from_norms

__all__ = [
    "Variant",
    "StrategyParams",
    "StrategyState",
    "NoiseDraw",
    "IterationRecord",
    "RunTrace",
    "init_state",
    "theory_sigma0",
    "step",
    "step_lb",
    "step_lub",
    "run",
    "TRACE_COLUMNS",
]

_INT_LIMIT = 2.0**62
_TINY_SQ = 1e-280


def _log_norm(v: np.ndarray, sq: float) -> float:
    """``log ||v||`` from its squared norm, rescaling when the square underflows."""
    if sq > _TINY_SQ:
        return 0.5 * math.log(sq)
    norm = math.hypot(*v)
    return math.log(norm) if norm > 0.0 else -math.inf
_NOISE_CHUNK = 2048


class Variant(str, enum.Enum):
    LB = "LB"
    LUB = "LUB"


@dataclass(frozen=True)
class StrategyParams:
    """Hyperparameters of the 1/s-success rule and the margin.

    Attributes
    ----------
    alpha : float
        Step-size increase factor on success (> 1).
    s : float
        Inverse target success rate (> 1); failures shrink sigma by
        ``alpha ** (-1 / (s - 1))``.
    sigma_lb : float
        Lower bound on ``sigma * <D>_i`` for every integer coordinate.
    variant : Variant
    """

    alpha: float = 1.5
    s: float = 5.0
    sigma_lb: float = 0.0
    variant: Variant = Variant.LB

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        if not self.alpha > 1.0:
            raise ContractError(f"alpha must exceed 1, got {self.alpha!r}")
        if not self.s > 1.0:
            raise ContractError(f"s must exceed 1, got {self.s!r}")
        if not self.sigma_lb >= 0.0:
            raise ContractError(f"sigma_lb must be nonnegative, got {self.sigma_lb!r}")

    @property
    def log_up(self) -> float:
        return math.log(self.alpha)

    @property
    def log_down(self) -> float:
        return -math.log(self.alpha) / (self.s - 1.0)


@dataclass(frozen=True)
class StrategyState:
    m: np.ndarray
    m_int: np.ndarray
    log_sigma: float
    sigma_d: np.ndarray
    t: int = 0

    @property
    def sigma(self) -> float:
        return math.exp(self.log_sigma)

    @property
    def d_scale(self) -> np.ndarray:
        """``<D>_i = sigma_d_i / sigma`` (may overflow to inf when sigma is tiny)."""
        with np.errstate(over="ignore"):
            return np.exp(np.log(self.sigma_d) - self.log_sigma)

    @property
    def dco(self) -> int:
        return self.m.shape[0]

    @property
    def din(self) -> int:
        return self.m_int.shape[0]


@dataclass(frozen=True)
class NoiseDraw:
    xi_co: np.ndarray
    xi_in: np.ndarray


@dataclass(frozen=True)
class IterationRecord:
    t: int
    success: bool
    z_changed_mask: np.ndarray
    log_norm_m: float
    log_sigma: float
    sigma_d: np.ndarray
    f_elite: float

    @property
    def sigma_d_min(self) -> float:
        return float(self.sigma_d.min()) if self.sigma_d.size else math.inf


def init_state(m0, m_int0, sigma0: float, d0=None) -> StrategyState:
    """Build the ``t = 0`` state; the margin floor is *not* applied here."""
    m = np.array(m0, dtype=float).reshape(-1)
    m_int = np.asarray(m_int0).reshape(-1)
    if m_int.size and not np.all(m_int == np.round(m_int)):
        raise ContractError("m_int0 must be integer valued")
    m_int = m_int.astype(np.int64)
    if m.size < 1:
        raise ContractError("m0 must have at least one component")
    if not np.all(np.isfinite(m)):
        raise ContractError("m0 must be finite")
    if not (sigma0 > 0.0 and math.isfinite(sigma0)):
        raise ContractError(f"sigma0 must be positive and finite, got {sigma0!r}")
    d = np.ones(m_int.size) if d0 is None else np.array(d0, dtype=float).reshape(-1)
    if d.shape != m_int.shape:
        raise ContractError(f"d0 has length {d.size}, expected {m_int.size}")
    if np.any(~(d > 0.0)):
        raise ContractError("d0 must be positive component-wise")
    return StrategyState(m=m, m_int=m_int, log_sigma=math.log(sigma0), sigma_d=sigma0 * d, t=0)


def theory_sigma0(sigma_lb: float, k: int, s: float) -> float:
    """Initial step-size ``sigma_lb ** (k / (s - 1))`` assumed by the analysis."""
    return sigma_lb ** (k / (s - 1.0))


def _check_dims(state: StrategyState, spec: ProblemSpec, noise: NoiseDraw) -> None:
    if state.m.shape != (spec.dco,) or state.m_int.shape != (spec.din,):
        raise ContractError("state dimensions do not match the problem")
    if noise.xi_co.shape != (spec.dco,) or noise.xi_in.shape != (spec.din,):
        raise ContractError("noise dimensions do not match the problem")


def _step(state: StrategyState, params: StrategyParams, spec: ProblemSpec,
          xi_co: np.ndarray, xi_in: np.ndarray) -> tuple[StrategyState, IterationRecord]:
    m, m_int, sigma_d = state.m, state.m_int, state.sigma_d
    x = m + math.exp(state.log_sigma) * xi_co
    raw = m_int + sigma_d * xi_in + 0.5
    if raw.size and not np.all(np.abs(raw) < _INT_LIMIT):
        raise ContractError("integer candidate is not representable")
    z = np.floor(raw).astype(np.int64)
    changed = z != m_int

    x_sq = float(x @ x)
    m_sq = float(m @ m)
    z_sq = float(z @ z)
    mi_sq = float(m_int @ m_int)
    success = no_worse_from_norms(spec.kind, x_sq, z_sq, m_sq, mi_sq)

    lb = params.sigma_lb
    if success:
        log_sigma = state.log_sigma + params.log_up
        grown = params.alpha * sigma_d
        if params.variant is Variant.LB:
            new_sd = np.maximum(lb, grown)
        else:
            capped = np.maximum(lb, np.minimum(grown, sigma_d))
            new_sd = np.where(changed, np.maximum(lb, grown), capped)
        m, m_int, m_sq, mi_sq = x, z, x_sq, z_sq
    else:
        log_sigma = state.log_sigma + params.log_down
        shrunk = math.exp(params.log_down) * sigma_d
        if params.variant is Variant.LB:
            new_sd = np.maximum(lb, shrunk)
        else:
            new_sd = np.maximum(lb, np.minimum(shrunk, sigma_d))

    new_state = StrategyState(m=m, m_int=m_int, log_sigma=log_sigma, sigma_d=new_sd, t=state.t + 1)
    log_norm = _log_norm(m, m_sq)
    record = IterationRecord(
        t=new_state.t,
        success=success,
        z_changed_mask=changed,
        log_norm_m=log_norm,
        log_sigma=log_sigma,
        sigma_d=new_sd,
        f_elite=m_sq + mi_sq,
    )
    return new_state, record


def step(state: StrategyState, params: StrategyParams, spec: ProblemSpec,
         noise: NoiseDraw) -> tuple[StrategyState, IterationRecord]:
    """One iteration of the variant selected by ``params.variant``."""
    _check_dims(state, spec, noise)
    return _step(state, params, spec, noise.xi_co, noise.xi_in)


def step_lb(state, params, spec, noise):
    if params.variant is not Variant.LB:
        raise ContractError("step_lb requires params.variant == LB")
    return step(state, params, spec, noise)


def step_lub(state, params, spec, noise):
    if params.variant is not Variant.LUB:
        raise ContractError("step_lub requires params.variant == LUB")
    return step(state, params, spec, noise)


TRACE_COLUMNS = ("t", "success", "z_changed_any", "log10_norm_m", "log_sigma", "sigma_d_min", "f_elite")


@dataclass
class RunTrace:
    """Per-iteration telemetry of one run; row ``k`` describes the state at ``t = k``."""

    t: np.ndarray
    success: np.ndarray
    z_changed_any: np.ndarray
    log_norm_m: np.ndarray
    log_sigma: np.ndarray
    sigma_d_min: np.ndarray
    f_elite: np.ndarray
    final_state: StrategyState
    hit_t: int | None = None
    seed: int | None = None
    run_index: int = 0
    epsilon: float | None = None
    meta: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return self.t.shape[0]

    @property
    def hit(self) -> bool:
        return self.hit_t is not None

    @property
    def log10_norm_m(self) -> np.ndarray:
        return self.log_norm_m / math.log(10.0)

    @property
    def budget_used(self) -> int:
        return int(self.t[-1])


def _seed_sequence(seed: int, run_index: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([int(seed), int(run_index)])


def run(state0: StrategyState, params: StrategyParams, spec: ProblemSpec, rng_seed: int,
        budget: int, epsilon: float | None = None, run_index: int = 0) -> RunTrace:
    """Iterate from ``state0`` for at most ``budget`` steps.

    Noise comes from a PCG64 stream seeded with ``(rng_seed, run_index)``.
    The run stops early at the first ``t`` with ``||m_t|| <= epsilon``
    (``t = 0`` included).
    """
    if int(budget) != budget or budget < 1:
        raise ContractError(f"budget must be a positive integer, got {budget!r}")
    if state0.m.shape != (spec.dco,) or state0.m_int.shape != (spec.din,):
        raise ContractError("state dimensions do not match the problem")
    budget = int(budget)
    rng = np.random.Generator(np.random.PCG64(_seed_sequence(rng_seed, run_index)))

    n = budget + 1
    success = np.zeros(n, dtype=bool)
    z_any = np.zeros(n, dtype=bool)
    log_norm = np.empty(n)
    log_sig = np.empty(n)
    sd_min = np.empty(n)
    f_el = np.empty(n)

    state = state0
    m_sq = float(state.m @ state.m)
    log_norm[0] = _log_norm(state.m, m_sq)
    log_sig[0] = state.log_sigma
    sd_min[0] = float(state.sigma_d.min()) if spec.din else math.inf
    f_el[0] = m_sq + float(state.m_int @ state.m_int)

    log_eps = math.log(epsilon) if epsilon is not None and epsilon > 0 else (
        -math.inf if epsilon is not None else None)
    hit_t = 0 if log_eps is not None and log_norm[0] <= log_eps else None

    dco, width = spec.dco, spec.dco + spec.din
    last = 0
    block = None
    k = 0
    while hit_t is None and last < budget:
        if block is None or k == block.shape[0]:
            block = rng.standard_normal((_NOISE_CHUNK, width))
            k = 0
        row = block[k]
        k += 1
        state, rec = _step(state, params, spec, row[:dco], row[dco:])
        last = rec.t
        success[last] = rec.success
        z_any[last] = bool(rec.z_changed_mask.any())
        log_norm[last] = rec.log_norm_m
        log_sig[last] = rec.log_sigma
        sd_min[last] = rec.sigma_d_min
        f_el[last] = rec.f_elite
        if log_eps is not None and rec.log_norm_m <= log_eps:
            hit_t = last

    rows = last + 1
    return RunTrace(
        t=np.arange(rows),
        success=success[:rows],
        z_changed_any=z_any[:rows],
        log_norm_m=log_norm[:rows],
        log_sigma=log_sig[:rows],
        sigma_d_min=sd_min[:rows],
        f_elite=f_el[:rows],
        final_state=state,
        hit_t=hit_t,
        seed=rng_seed,
        run_index=run_index,
        epsilon=epsilon,
    )
