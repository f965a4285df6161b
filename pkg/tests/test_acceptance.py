"""Acceptance criteria, each pinned at its stated tolerance.

Run with ``pytest tests/test_acceptance.py -v``; a one-line verdict per
criterion is printed in the terminal summary.
"""

import math
from functools import cache

import numpy as np
import pytest

from mies.diagnostics import (
    hitting_time_fit,
    log_improvement_mc,
    log_ratio_slope,
    stagnation_detector,
    truncated_log_improvement_oracle,
)
from mies.harness import cli
from mies.harness.config import ExperimentConfig, validate
from mies.harness.props import (
    cdf_ratio_grid,
    distance_drift_floor,
    integer_success_closed_form,
    quantile_bound_grid,
    ratio_variance_bound,
)
from mies.problems import ProblemKind, ProblemSpec
from mies.strategies import Variant, run

SEEDS = tuple(range(10))
EPS = 1e-8


def config(kind, dco, din, variant, s, budget, epsilon=None, p_mut=None, m_int0_mode="zeros"):
    return validate(ExperimentConfig(
        problem=ProblemSpec(kind, dco, din),
        variant=variant,
        seeds=SEEDS,
        budget=budget,
        s=s,
        p_mut=p_mut if p_mut is not None else 1.0 / (dco + din) if din else None,
        sigma_lb=0.0,
        epsilon=epsilon,
        m_int0_mode=m_int0_mode,
    ))


@cache
def ensemble(kind, dco, din, variant, s, budget, epsilon=None, p_mut=None, m_int0_mode="zeros"):
    cfg = config(kind, dco, din, variant, s, budget, epsilon, p_mut, m_int0_mode)
    return tuple(run(cfg.initial_state(seed), cfg.params, cfg.problem, seed, cfg.budget, epsilon=cfg.epsilon)
                 for seed in cfg.seeds)


LEX = ProblemKind.LEXICO_SPHERE_INT


def test_criterion_1_premature_convergence(criterion):
    traces = ensemble(LEX, 100, 100, Variant.LB, 5.0, 200_000, p_mut=1 / 200)
    n_stag = sum(stagnation_detector(tr).stagnated for tr in traces)
    slopes = [log_ratio_slope(tr) for tr in traces]
    ok = n_stag >= 8 and all(sl > 0 for sl in slopes)
    criterion("1", ok, f"stagnated {n_stag}/10 (need >= 8); min log-ratio slope {min(slopes):.3g} (need > 0)")
    assert n_stag >= 8
    assert all(sl > 0 for sl in slopes)


def test_criterion_2_linear_convergence_scaling(criterion):
    records = []
    hits = 0
    for d in (8, 16, 32, 64):
        for tr in ensemble(LEX, d, d, Variant.LUB, 5.0, 1_000_000, epsilon=EPS):
            hits += tr.hit
            records.append((d, tr.hit_t))
    rep = hitting_time_fit(records, EPS)
    ok = hits == 40 and rep.max_min_ratio <= 3.0
    norm = ", ".join(f"{d}: {v:.3g}" for d, v in rep.normalized.items())
    criterion("2", ok, f"hit {hits}/40; normalized T {{{norm}}}; max/min {rep.max_min_ratio:.3f} (need <= 3)")
    assert hits == 40
    assert not rep.censored_flag
    assert rep.max_min_ratio <= 3.0


def test_criterion_3_s_threshold(criterion):
    low = ensemble(LEX, 100, 100, Variant.LUB, 2.0, 200_000, epsilon=EPS)
    high = ensemble(LEX, 100, 100, Variant.LUB, 5.0, 200_000, epsilon=EPS)
    n_low = sum(stagnation_detector(tr).stagnated for tr in low)
    n_high = sum(stagnation_detector(tr).stagnated for tr in high)
    hits = sum(tr.hit for tr in high)
    ok = n_low >= 8 and n_high == 0 and hits == 10
    criterion("3", ok, f"s=2 stagnated {n_low}/10 (need >= 8); s=5 stagnated {n_high}/10, hit {hits}/10")
    assert n_low >= 8
    assert n_high == 0 and hits == 10


def test_criterion_4_sphere_int(criterion):
    kw = dict(kind=ProblemKind.SPHERE_INT, dco=20, din=20, s=5.0, budget=100_000,
              m_int0_mode="uniform_1_3_int")
    lub = ensemble(variant=Variant.LUB, **kw)
    lb = ensemble(variant=Variant.LB, **kw)
    lub_ok = sum(float(tr.f_elite.min()) <= 1e-10 for tr in lub)
    lb_high = sum(float(tr.f_elite[-1]) > 1e-10 for tr in lb)
    ok = lub_ok == 10 and lb_high >= 8
    criterion("4", ok, f"LUB reached f <= 1e-10 in {lub_ok}/10; LB final f > 1e-10 in {lb_high}/10 (need >= 8); "
                       f"LB median final f {np.median([tr.f_elite[-1] for tr in lb]):.3g}")
    assert lub_ok == 10
    assert lb_high >= 8


def test_criterion_5_inequality_grids(criterion):
    a, b = cdf_ratio_grid(), quantile_bound_grid()
    ok = a.passed and b.passed and a.data["n"] >= 10_000 and b.data["n"] >= 10_000
    criterion("5", ok, f"{a.detail} (cdf ratio); {b.detail} (quantile bound)")
    assert a.passed, a.data["failures"]
    assert b.passed, b.data["failures"]


def test_criterion_6_distance_drift_floor(criterion):
    chk = distance_drift_floor(dcos=(2, 10, 50), s=5.0, n_replications=10_000)
    criterion("6", chk.passed, chk.detail)
    assert chk.passed, [c for c in chk.data["cells"] if not c[-1]]


def test_criterion_7_variance_bound(criterion):
    chk = ratio_variance_bound(dcos=(10, 50), s_values=(3.0, 5.0), alpha=1.5, n_replications=10_000)
    criterion("7", chk.passed, chk.detail)
    assert chk.passed


def test_criterion_8_integer_success_closed_form(criterion):
    chk = integer_success_closed_form(dins=(10, 100), n=1_000_000)
    criterion("8", chk.passed, chk.detail)
    assert chk.passed


def test_criterion_9a_truncated_improvement_vs_sampling(criterion):
    rows = []
    ok = True
    for ratio in (1.0, 2.0):
        exact = truncated_log_improvement_oracle(ratio, 4)
        rep = log_improvement_mc(ratio, 4, 10_000_000, 90 + int(ratio))
        z = abs(exact - rep.estimate) / rep.std_error
        ok &= z <= 3.0
        rows.append(f"ratio {ratio:g}: {exact:.6f} vs {rep.estimate:.6f} ({z:.2f} SE)")
    criterion("9a", ok, "; ".join(rows))
    assert ok


def test_criterion_9b_truncated_improvement_decay(criterion):
    vals = {r: truncated_log_improvement_oracle(r, 4) for r in (4.0, 8.0, 16.0)}
    ratios = {r: abs(vals[2 * r]) / abs(vals[r]) for r in (4.0, 8.0)}
    ok = all(q <= 0.25 for q in ratios.values())
    criterion("9b", ok, "|E(2r)|/|E(r)|: " + ", ".join(f"r={r:g}: {q:.3f}" for r, q in ratios.items())
              + " (need <= 0.25; the magnitude decays like 1/r, so the ratio tends to 1/2)")
    for r, q in ratios.items():
        assert q <= 0.25, f"|E({2 * r:g})| / |E({r:g})| = {q:.3f}"


def test_criterion_10_continuous_baseline(criterion):
    per_dim = {}
    hits = 0
    for d in (10, 40):
        traces = ensemble(ProblemKind.SPHERE_INT, d, 0, Variant.LB, 5.0, 1_000_000, epsilon=EPS, p_mut=None)
        hits += sum(tr.hit for tr in traces)
        per_dim[d] = float(np.mean([tr.hit_t for tr in traces if tr.hit])) / (d * math.log(1 / EPS))
    ratio = max(per_dim.values()) / min(per_dim.values())
    ok = hits == 20 and ratio <= 3.0
    criterion("10", ok, f"hit {hits}/20; normalized T {per_dim[10]:.3g}, {per_dim[40]:.3g}; max/min {ratio:.3f}")
    assert hits == 20
    assert ratio <= 3.0


CONFIG_11 = """
[problem]
kind = LexicoSphereInt
dco = 20
din = 20

[strategy]
variant = LB
p_mut = 1/40

[run]
seeds = 0-3
budget = 5000
trace_stride = 1
"""


def test_criterion_11_determinism_and_floor(tmp_path, criterion, capsys):
    cfg = tmp_path / "det.ini"
    cfg.write_text(CONFIG_11)
    codes = [cli.main(["run", str(cfg), "--out", str(tmp_path / name)]) for name in ("a", "b")]
    names = sorted(p.name for p in (tmp_path / "a").glob("trace_seed*.csv"))
    identical = all((tmp_path / "a" / n).read_bytes() == (tmp_path / "b" / n).read_bytes() for n in names)
    verify = cli.main(["verify-trace", *(str(tmp_path / "a" / n) for n in names)])
    capsys.readouterr()
    ok = codes == [0, 0] and len(names) == 4 and identical and verify == 0
    criterion("11", ok, f"run exit codes {codes}; {len(names)} traces byte-identical={identical}; "
                        f"verify-trace exit {verify}")
    assert codes == [0, 0] and len(names) == 4
    assert identical
    assert verify == 0
