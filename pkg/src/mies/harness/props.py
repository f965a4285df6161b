"""Grid and statistical checks of the analytic inequalities and drift bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..diagnostics.drift import block_drift_mc, variance_upper_bound
from ..diagnostics.success import p_succ_in, p_succ_in_mc
from ..normal_math import (
    check_cdf_ratio_inequality,
    check_quantile_bound,
    sigma_lb_from_pmut,
    std_normal_cdf,
)
from ..problems import ProblemKind, ProblemSpec
from ..strategies import StrategyParams, StrategyState, Variant

RATIO_GRID_THETA = np.logspace(-3, 1, 100)
RATIO_GRID_BETA = 1.0 + np.logspace(-3, math.log10(49.0), 100)
QUANTILE_GRID_Y = np.logspace(-12, math.log10(std_normal_cdf(-1.0) * (1.0 - 1e-9)), 10_000)


@dataclass
class PropertyCheck:
    name: str
    passed: bool
    detail: str
    data: dict = field(default_factory=dict)

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail}"


def cdf_ratio_grid() -> PropertyCheck:
    failures = []
    for theta in RATIO_GRID_THETA:
        for beta in RATIO_GRID_BETA:
            rep = check_cdf_ratio_inequality(float(theta), float(beta))
            if not rep.holds:
                failures.append((float(theta), float(beta), rep.lhs, rep.rhs))
    n = RATIO_GRID_THETA.size * RATIO_GRID_BETA.size
    return PropertyCheck("cdf ratio inequality grid", not failures,
                     f"{n - len(failures)}/{n} points hold", {"failures": failures[:10], "n": n})


def quantile_bound_grid() -> PropertyCheck:
    failures = []
    for y in QUANTILE_GRID_Y:
        rep = check_quantile_bound(float(y))
        if not rep.holds:
            failures.append((float(y), rep.lhs, rep.rhs))
    n = QUANTILE_GRID_Y.size
    return PropertyCheck("quantile bound grid", not failures,
                     f"{n - len(failures)}/{n} points hold", {"failures": failures[:10], "n": n})


def drift_template(dco: int, din: int, sigma_bar: float, sigma_lb: float) -> StrategyState:
    """State at ``m = e1`` with normalized step-size ``sigma_bar = dco * sigma / ||m||``
    and every integer coordinate at the margin."""
    m = np.zeros(dco)
    m[0] = 1.0
    sigma = sigma_bar / dco
    return StrategyState(m=m, m_int=np.zeros(din, dtype=np.int64), log_sigma=math.log(sigma),
                         sigma_d=np.full(din, sigma_lb))


def _lb_setup(dco: int, din: int, s: float, alpha: float = 1.5):
    p_mut = 1.0 / (dco + din)
    params = StrategyParams(alpha=alpha, s=s, sigma_lb=sigma_lb_from_pmut(p_mut), variant=Variant.LB)
    return params, ProblemSpec(ProblemKind.LEXICO_SPHERE_INT, dco, din)


def distance_drift_floor(dcos=(2, 10, 50), s: float = 5.0, sigma_bars=(0.5, 1.5, 4.0),
                         n_replications: int = 10_000, seed: int = 5) -> PropertyCheck:
    """Block drift of ``log ||m||`` over ``i`` steps stays above ``-i/dco - 3 SE``."""
    cells = []
    ok = True
    for dco in dcos:
        for din in (0, dco):
            params, spec = _lb_setup(dco, din, s)
            for sb in sigma_bars:
                tmpl = drift_template(dco, din, sb, params.sigma_lb)
                for i in (1, int(s)):
                    rep = block_drift_mc(tmpl, params, spec, i, n_replications, seed, "log_norm_m")
                    floor = -i / dco - 3.0 * rep.std_error
                    good = rep.estimate >= floor
                    ok &= good
                    cells.append((dco, din, sb, i, rep.estimate, rep.std_error, good))
    worst = min(cells, key=lambda c: (c[4] + c[3] / c[0]))
    return PropertyCheck("log-distance drift floor", ok,
                     f"{sum(c[-1] for c in cells)}/{len(cells)} cells; tightest margin "
                     f"{worst[4] + worst[3] / worst[0]:.4g} at dco={worst[0]}, din={worst[1]}, "
                     f"sigma_bar={worst[2]}, i={worst[3]}", {"cells": cells})


def ratio_variance_bound(dcos=(10, 50), s_values=(3.0, 5.0), alpha: float = 1.5, sigma_bar: float = 1.5,
                         n_replications: int = 10_000, seed: int = 6) -> PropertyCheck:
    """Variance of the ``s``-block change of ``log(||m|| / sigma)`` stays under its bound."""
    cells = []
    ok = True
    for dco in dcos:
        for s in s_values:
            params, spec = _lb_setup(dco, dco, s, alpha)
            tmpl = drift_template(dco, dco, sigma_bar, params.sigma_lb)
            rep = block_drift_mc(tmpl, params, spec, int(s), n_replications, seed, "log_ratio")
            bound = variance_upper_bound(dco, s, alpha)
            good = rep.variance <= bound
            ok &= good
            cells.append((dco, s, rep.variance, bound, good))
    return PropertyCheck("block log-ratio variance bound", ok,
                     "; ".join(f"dco={c[0]} s={c[1]:g}: {c[2]:.4g} <= {c[3]:.4g}" for c in cells),
                     {"cells": cells})


def integer_success_closed_form(dins=(10, 100), alpha: float = 1.5, s: float = 5.0, n: int = 1_000_000,
                                seed: int = 9, trend_dins=(50, 100, 200, 400)) -> PropertyCheck:
    """Closed-form integer success probability against sampling, plus the case split.

    ``p_mut = 1 / (2 din)`` throughout, so ``p_mut * din`` is fixed.
    """
    factor = alpha ** (1.0 / (s - 1.0))
    cells = []
    ok = True
    for din in dins:
        lb = sigma_lb_from_pmut(1.0 / (2 * din))
        for label, sig in (("margin", lb), ("raised", lb * factor)):
            exact = p_succ_in(sig, din)
            rep = p_succ_in_mc(sig, din, n, seed + din)
            good = abs(exact - rep.estimate) <= 3.0 * rep.std_error
            ok &= good
            cells.append((din, label, exact, rep.estimate, rep.std_error, good))
        split = p_succ_in(lb * factor, din) < p_succ_in(lb, din)
        ok &= split
    trend = [p_succ_in(sigma_lb_from_pmut(1.0 / (2 * d)) * factor, d) for d in trend_dins]
    decreasing = all(b < a for a, b in zip(trend, trend[1:]))
    ok &= decreasing
    detail = "; ".join(f"din={c[0]} {c[1]}: |{c[2]:.5f}-{c[3]:.5f}|/SE={abs(c[2] - c[3]) / c[4]:.2f}"
                       for c in cells)
    detail += f"; raised-margin trend {['%.4f' % v for v in trend]} decreasing={decreasing}"
    return PropertyCheck("integer success closed form", ok, detail, {"cells": cells, "trend": trend})


def run_all(quick: bool = False) -> list[PropertyCheck]:
    """All checks; ``quick`` reduces replication counts for smoke testing."""
    reps = 2_000 if quick else 10_000
    n9 = 100_000 if quick else 1_000_000
    return [
        cdf_ratio_grid(),
        quantile_bound_grid(),
        distance_drift_floor(n_replications=reps),
        ratio_variance_bound(n_replications=reps),
        integer_success_closed_form(n=n9),
    ]
