"""Success probabilities of the integer and continuous blocks."""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict

import numpy as np

from ..errors import ContractError
from ..normal_math import std_normal_cdf

_CHUNK_ELEMS = 2_000_000


@dataclass(frozen=True)
class DriftReport:
    """Monte-Carlo mean with its standard error.

    ``variance`` is the sample variance of the per-replication values; for
    Bernoulli estimators it is ``p(1-p)`` and ``std_error`` is the binomial SE.
    """

    estimate: float
    std_error: float
    n_replications: int
    block_len: int = 1
    variance: float = 0.0
    observable: str = ""

    def to_dict(self) -> dict:
        return asdict(self)


def bernoulli_report(hits: int, n: int, observable: str) -> DriftReport:
    p = hits / n
    var = p * (1.0 - p)
    return DriftReport(p, math.sqrt(var / n), n, 1, var, observable)


def p_succ_in(sigma_in: float, din: int) -> float:
    """Probability that ``Int[sigma_in * N]`` is the zero vector in ``din`` coordinates.

    Closed form ``(1 - 2 Phi(-1 / (2 sigma_in)))**din``, evaluated through
    ``log1p`` so the deep-tail regime keeps its digits.
    """
    if not sigma_in > 0.0:
        raise ContractError(f"sigma_in must be positive, got {sigma_in!r}")
    if din < 0:
        raise ContractError(f"din must be nonnegative, got {din!r}")
    if din == 0:
        return 1.0
    tail = 2.0 * std_normal_cdf(-0.5 / sigma_in)
    return math.exp(din * math.log1p(-tail))


def p_succ_in_mc(sigma_in: float, din: int, n: int, seed: int) -> DriftReport:
    """Sampled counterpart of :func:`p_succ_in` using the actual rounding rule."""
    if n < 1 or din < 1:
        raise ContractError("need n >= 1 and din >= 1")
    rng = np.random.default_rng(seed)
    rows = max(1, _CHUNK_ELEMS // din)
    hits = 0
    done = 0
    while done < n:
        k = min(rows, n - done)
        z = np.floor(sigma_in * rng.standard_normal((k, din)) + 0.5)
        hits += int(np.count_nonzero(~np.any(z != 0.0, axis=1)))
        done += k
    return bernoulli_report(hits, n, "p_succ_in")


class ContinuousSuccessSampler:
    """Common-random-numbers sampler for ``Pr(||e1 + (sigma_bar/dco) N|| <= 1 - r)``.

    Reusing one noise sample across ``sigma_bar`` makes the estimate a
    deterministic function of ``sigma_bar``; for ``r = 0`` it is monotone,
    which lets bisection find the calibrating step-sizes.
    """

    def __init__(self, dco: int, n: int, seed: int):
        if dco < 1 or n < 1:
            raise ContractError("need dco >= 1 and n >= 1")
        self.dco = dco
        self.n = n
        rng = np.random.default_rng(seed)
        first = np.empty(n)
        sq = np.empty(n)
        rows = max(1, _CHUNK_ELEMS // dco)
        for lo in range(0, n, rows):
            g = rng.standard_normal((min(rows, n - lo), dco))
            first[lo:lo + g.shape[0]] = g[:, 0]
            sq[lo:lo + g.shape[0]] = np.einsum("ij,ij->i", g, g)
        self._first = first
        self._sq = sq

    def report(self, r: float, sigma_bar: float) -> DriftReport:
        if r >= 1.0:
            return DriftReport(0.0, 0.0, self.n, 1, 0.0, "p_succ_co")
        c = sigma_bar / self.dco
        # ||e1 + c N||^2 = 1 + 2 c N_1 + c^2 ||N||^2
        dist_sq = 1.0 + 2.0 * c * self._first + c * c * self._sq
        hits = int(np.count_nonzero(dist_sq <= (1.0 - r) ** 2))
        return bernoulli_report(hits, self.n, "p_succ_co")

    def __call__(self, r: float, sigma_bar: float) -> float:
        return self.report(r, sigma_bar).estimate

    def solve_sigma_bar(self, target: float, lo: float = 1e-6, hi: float = 1e3,
                        iters: int = 200) -> float:
        """Smallest ``sigma_bar`` with ``p(0, sigma_bar) <= target`` (bisection)."""
        if not (self(0.0, lo) > target > self(0.0, hi)):
            raise ContractError(f"target {target} not bracketed on [{lo}, {hi}]")
        for _ in range(iters):
            mid = math.sqrt(lo * hi)
            if self(0.0, mid) > target:
                lo = mid
            else:
                hi = mid
            if hi / lo - 1.0 < 1e-12:
                break
        return hi

    def min_over(self, r: float, lo: float, hi: float, points: int = 201) -> float:
        grid = np.linspace(lo, hi, points)
        return min(self(r, g) for g in grid)


def p_succ_co_mc(r: float, dco: int, sigma_bar: float, n: int, seed: int) -> DriftReport:
    """Monte-Carlo estimate of the rate-``r`` continuous success probability."""
    if not sigma_bar > 0.0:
        raise ContractError(f"sigma_bar must be positive, got {sigma_bar!r}")
    return ContinuousSuccessSampler(dco, n, seed).report(r, sigma_bar)
