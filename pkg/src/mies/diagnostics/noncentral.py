"""Expected truncated log-improvement of one isotropic Gaussian mutation.

For ``x ~ N(m, sigma^2 I_d)`` the quantity ``E[log(min(||x||, ||m||) / ||m||)]``
equals ``E[0.5 * log(Z / lam) ; Z <= lam]`` with ``Z = ||x||^2 / sigma^2`` a
noncentral chi-squared variable (``k = d``, ``lam = (||m|| / sigma)^2``).
The density is evaluated from its Poisson mixture and integrated with QUADPACK.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate

from ..errors import ContractError, NumericalError
from .success import DriftReport

_SERIES_RTOL = 1e-16
_LOG2 = math.log(2.0)


def _log_chi2_pdf(z: float, k: float) -> float:
    h = 0.5 * k
    return -h * _LOG2 - math.lgamma(h) + (h - 1.0) * math.log(z) - 0.5 * z


def ncx2_pdf(z: float, k: int, lam: float) -> float:
    """Noncentral chi-squared density by its Poisson-weighted series.

    Summation starts at the largest term and walks outward in both
    directions until a term drops below ``1e-16`` of the running sum.
    """
    if z <= 0.0:
        return 0.0
    if lam == 0.0:
        return math.exp(_log_chi2_pdf(z, k))
    b = 0.5 * lam
    h = 0.5 * k
    # t_{j+1}/t_j = b z / (2 (j+1)(h+j)); the peak sits where this ratio is 1
    c = 0.5 * b * z
    j0 = max(0, int(math.floor((-(h + 1.0) + math.sqrt((h - 1.0) ** 2 + 4.0 * c)) / 2.0)))
    log_t0 = -b + j0 * math.log(b) - math.lgamma(j0 + 1.0) + _log_chi2_pdf(z, k + 2.0 * j0)

    total = 1.0
    term = 1.0
    j = j0
    while True:
        term *= c / ((j + 1.0) * (h + j))
        j += 1
        total += term
        if term < _SERIES_RTOL * total:
            break
    term = 1.0
    j = j0
    while j > 0:
        term *= j * (h + j - 1.0) / c
        j -= 1
        total += term
        if term < _SERIES_RTOL * total:
            break
    return math.exp(log_t0) * total


def truncated_log_improvement_oracle(ratio: float, d: int) -> float:
    """``E[log(min(||x||, ||m||) / ||m||)]`` for ``||m|| / sigma = ratio``.

    Raises
    ------
    NumericalError
        When QUADPACK reports non-convergence; ``diagnostics`` holds its
        message, error estimate and evaluation count.
    """
    if not ratio > 0.0:
        raise ContractError(f"ratio must be positive, got {ratio!r}")
    if d < 4:
        raise ContractError(f"d must be at least 4, got {d}")
    lam = ratio * ratio
    sd = math.sqrt(2.0 * (d + 2.0 * lam))
    lo = max(0.0, d + lam - 15.0 * sd)
    if lo >= lam:
        return 0.0
    points = [p for p in (lam - j * sd for j in (0.5, 1, 2, 3, 5, 8)) if lo < p < lam]

    def integrand(z: float) -> float:
        if z <= 0.0:
            return 0.0
        return 0.5 * math.log(z / lam) * ncx2_pdf(z, d, lam)

    value, err, info, *rest = integrate.quad(
        integrand, lo, lam, points=points or None, epsabs=1e-15, epsrel=1e-11,
        limit=400, full_output=True,
    )
    if rest and rest[0]:
        raise NumericalError(
            "quadrature did not converge",
            message=rest[0], abserr=err, neval=info.get("neval"), ratio=ratio, d=d,
        )
    return min(value, 0.0)


def log_improvement_mc(ratio: float, d: int, n: int, seed: int) -> DriftReport:
    """Direct sampling estimate of the same expectation (independent of the series)."""
    if n < 2:
        raise ContractError("need n >= 2")
    rng = np.random.default_rng(seed)
    rows = max(1, 2_000_000 // d)
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < n:
        k = min(rows, n - done)
        x = rng.standard_normal((k, d))
        x[:, 0] += ratio
        r = np.sqrt(np.einsum("ij,ij->i", x, x)) / ratio
        vals = np.log(np.minimum(r, 1.0))
        total += float(vals.sum())
        total_sq += float(vals @ vals)
        done += k
    mean = total / n
    var = (total_sq - n * mean * mean) / (n - 1)
    return DriftReport(mean, math.sqrt(max(var, 0.0) / n), n, 1, var, "log_improvement")
