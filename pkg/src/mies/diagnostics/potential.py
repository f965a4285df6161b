"""Potential function and the truncated-drift constants for the LUB variant."""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict

import numpy as np

from ..errors import ContractError, DomainError
from ..strategies import StrategyParams, StrategyState
from .success import ContinuousSuccessSampler, p_succ_in


@dataclass(frozen=True)
class PotentialConfig:
    """Weights and calibration of the potential.

    ``ell`` and ``u`` are normalized step-sizes with continuous success
    probabilities ``p_ell`` and ``p_u`` at rate 0.
    """

    v: float
    v_in: float
    ell: float
    u: float
    p_ell: float
    p_u: float
    a_co: float

    def validate(self, params: StrategyParams) -> None:
        a, s = params.alpha, params.s
        problems = []
        if not self.u / self.ell > a ** (s / (s - 1.0)):
            problems.append(f"u/ell = {self.u / self.ell:.6g} must exceed alpha^(s/(s-1))")
        if not (0.0 < self.p_u < 1.0 / s < self.p_ell < 0.5):
            problems.append("need 0 < p_u < 1/s < p_ell < 1/2")
        if not (0.0 < self.v < min(1.0, self.a_co / math.log(a))):
            problems.append("need 0 < v < min(1, A_co / log(alpha))")
        if not (self.v_in > 0.0 and self.ell > 0.0 and self.u > 0.0 and self.a_co > 0.0):
            problems.append("v_in, ell, u, A_co must be positive")
        if problems:
            raise ContractError("; ".join(problems))

    def truncation(self, params: StrategyParams) -> float:
        """``A = A_co + v_in * log(alpha) / (s - 1)``."""
        return self.a_co + self.v_in * math.log(params.alpha) / (params.s - 1.0)


def _log_plus_max(a_log: float, b_log: float) -> float:
    return max(0.0, a_log, b_log)


def potential_value(state: StrategyState, cfg: PotentialConfig, params: StrategyParams) -> float:
    """Potential of ``state``; always at least ``log ||m||``.

    Works on logarithms throughout, so extreme ``||m|| / sigma`` ratios do
    not overflow.  When the integer scales differ across coordinates the mean
    of ``log(sigma <D>_i / sigma_lb)`` is used.
    """
    norm = math.hypot(*state.m)
    if norm == 0.0:
        raise DomainError("potential is undefined at ||m|| = 0")
    a, s, dco = params.alpha, params.s, state.dco
    log_m = math.log(norm)
    log_sig = state.log_sigma
    first = math.log(a) + math.log(cfg.ell) + log_m - math.log(dco) - log_sig
    second = math.log(a) / (s - 1.0) + math.log(dco) + log_sig - math.log(cfg.u) - log_m
    value = log_m + cfg.v * _log_plus_max(first, second)
    if state.din and cfg.v_in and params.sigma_lb > 0.0:
        value += cfg.v_in * float(np.mean(np.log(state.sigma_d / params.sigma_lb)))
    return value


@dataclass(frozen=True)
class DriftBoundConfig:
    gamma: float
    p_succ_in_lb: float
    r_star: float
    r_prime: float
    p_star: float
    p_prime: float


def gamma_exponent(params: StrategyParams) -> float:
    """``(1 - alpha^(-2/(s-1))) / 2``."""
    return 0.5 * (1.0 - params.alpha ** (-2.0 / (params.s - 1.0)))


def calibrate(params: StrategyParams, dco: int, *, p_u: float | None = None,
              p_ell: float | None = None, n: int = 200_000, seed: int = 0,
              sampler: ContinuousSuccessSampler | None = None) -> tuple[float, float, float, float]:
    """Return ``(ell, u, p_ell, p_u)`` with ``p(0, ell) = p_ell`` and ``p(0, u) = p_u``.

    Defaults are ``p_u = 1/(2s)`` and ``p_ell = (1/s + 1/2)/2``.
    """
    s = params.s
    p_u = 1.0 / (2.0 * s) if p_u is None else p_u
    p_ell = 0.5 * (1.0 / s + 0.5) if p_ell is None else p_ell
    sampler = sampler or ContinuousSuccessSampler(dco, n, seed)
    ell = sampler.solve_sigma_bar(p_ell)
    u = sampler.solve_sigma_bar(p_u)
    if not u / ell > params.alpha ** (s / (s - 1.0)):
        raise ContractError(f"calibrated u/ell = {u / ell:.6g} is not admissible")
    return ell, u, p_ell, p_u


def linear_convergence_config(params: StrategyParams, dco: int, din: int, p_mut: float, *,
                   p_u: float | None = None, p_ell: float | None = None,
                   n: int = 200_000, seed: int = 0) -> tuple[PotentialConfig, DriftBoundConfig]:
    """Linear-convergence parameterization: ``A_co = 1/dco``, ``v = p'/(2 dco log alpha)``, ``v_in = 2v``.

    ``p'`` and ``p*`` are minima of the sampled continuous success
    probability over ``[ell, u]`` at rates ``r'`` and ``r*``.
    """
    sampler = ContinuousSuccessSampler(dco, n, seed)
    ell, u, p_ell, p_u = calibrate(params, dco, p_u=p_u, p_ell=p_ell, sampler=sampler)
    log_a = math.log(params.alpha)
    if not dco * log_a > 1.0:
        raise ContractError("need dco * log(alpha) > 1 for the rate r'")
    r_prime = 1.0 - math.exp(-log_a / (dco * log_a - 1.0))
    p_prime = sampler.min_over(r_prime, ell, u)
    if not p_prime > 0.0:
        raise ContractError(f"sampled p' is 0 at rate r' = {r_prime:.4g} over [{ell:.4g}, {u:.4g}]; "
                            "raise n or choose other (p_u, p_ell)")
    a_co = 1.0 / dco
    v = p_prime / (2.0 * dco * log_a)
    r_star = 1.0 - math.exp(-a_co / (1.0 - v))
    p_star = sampler.min_over(r_star, ell, u)
    cfg = PotentialConfig(v=v, v_in=2.0 * v, ell=ell, u=u, p_ell=p_ell, p_u=p_u, a_co=a_co)
    bounds = DriftBoundConfig(
        gamma=gamma_exponent(params),
        p_succ_in_lb=(1.0 - p_mut) ** din,
        r_star=r_star,
        r_prime=r_prime,
        p_star=p_star,
        p_prime=p_prime,
    )
    return cfg, bounds


@dataclass(frozen=True)
class DriftBounds:
    b1_finite_part: float
    b2: float
    b2_prime: float
    b3: float
    b3_prime: float
    b4: float
    b4_prime: float
    a: float
    b1_remainder_omitted: bool = True

    @property
    def b(self) -> float:
        """``min(B1, B2, B3, B4)`` with B1 taken at its finite part."""
        return min(self.b1_finite_part, self.b2, self.b3, self.b4)

    @property
    def b234(self) -> float:
        return min(self.b2, self.b3, self.b4)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["b"] = self.b
        return d


def drift_bound_b(params: StrategyParams, din: int, p_mut: float, cfg: PotentialConfig,
                  p_star: float, p_in_lb: float | None = None) -> DriftBounds:
    """Evaluate the truncated-drift constants from their inputs.

    ``B1`` is reported without its ``O(din^-gamma)`` correction, which has
    no computable constant; ``b1_remainder_omitted`` flags this.
    """
    cfg.validate(params)
    if not 0.0 <= p_star <= 1.0:
        raise ContractError(f"p_star must be a probability, got {p_star!r}")
    if p_in_lb is None:
        p_in_lb = (1.0 - p_mut) ** din
    s, log_a, v = params.s, math.log(params.alpha), cfg.v
    b2p = cfg.a_co * p_star - s / (s - 1.0) * v * log_a
    b3p = v * log_a / (s - 1.0) * (s * cfg.p_ell - 1.0)
    b4p = v * log_a / (s - 1.0) * (1.0 - s * cfg.p_u)
    return DriftBounds(
        b1_finite_part=(cfg.v_in - v) / (s - 1.0) * log_a,
        b2=b2p * p_in_lb,
        b2_prime=b2p,
        b3=v * log_a / (s - 1.0) * (s * cfg.p_ell * p_in_lb - 1.0),
        b3_prime=b3p,
        b4=b4p * p_in_lb,
        b4_prime=b4p,
        a=cfg.truncation(params),
    )


def p_succ_in_lb(params: StrategyParams, din: int) -> float:
    """``p_succ_in`` evaluated exactly at the margin."""
    return p_succ_in(params.sigma_lb, din)
