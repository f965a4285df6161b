import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mies.errors import ContractError
from mies.problems import ProblemKind, ProblemSpec
from mies.strategies import (
    NoiseDraw,
    StrategyParams,
    StrategyState,
    Variant,
    init_state,
    run,
    step,
    step_lb,
    step_lub,
    theory_sigma0,
)

LEX11 = ProblemSpec(ProblemKind.LEXICO_SPHERE_INT, 1, 1)
A = 1.5
DOWN = A ** (-1 / 4)


def params(variant, lb=0.2, s=5.0):
    return StrategyParams(alpha=A, s=s, sigma_lb=lb, variant=variant)


def noise(co, inn):
    return NoiseDraw(np.array(co, dtype=float), np.array(inn, dtype=float))


class TestParams:
    def test_defaults(self):
        p = StrategyParams()
        assert (p.alpha, p.s, p.variant) == (1.5, 5.0, Variant.LB)
        assert p.log_down == pytest.approx(-math.log(1.5) / 4)

    @pytest.mark.parametrize("kw", [{"alpha": 1.0}, {"s": 1.0}, {"sigma_lb": -0.1}, {"variant": "XX"}])
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            StrategyParams(**kw)


class TestInit:
    def test_default_d_is_ones_and_no_floor(self):
        st0 = init_state([1.0, 2.0], [0, 0, 0], 0.5)
        assert st0.sigma == pytest.approx(0.5)
        assert np.allclose(st0.sigma_d, 0.5)
        assert np.allclose(st0.d_scale, 1.0)
        assert st0.t == 0 and st0.dco == 2 and st0.din == 3

    @pytest.mark.parametrize("args", [
        ([], [0], 1.0), ([1.0], [0.5], 1.0), ([math.inf], [0], 1.0),
        ([1.0], [0], 0.0), ([1.0], [0], 1.0, [1.0, 1.0]), ([1.0], [0], 1.0, [-1.0]),
    ])
    def test_invalid(self, args):
        with pytest.raises(ContractError):
            init_state(*args)

    def test_theory_sigma0(self):
        assert theory_sigma0(0.25, 2, 5.0) == pytest.approx(0.25 ** 0.5)


class TestHandTraces:
    """Two-coordinate problem advanced with fixed noise; expected values worked by hand."""

    def start(self, m_int=0):
        return init_state([2.0], [m_int], 1.0)

    def test_continuous_success_then_failure_lub(self):
        p = params(Variant.LUB)
        s1, r1 = step_lub(self.start(), p, LEX11, noise([-1.0], [0.3]))
        # x = 1, raw = 0.8 -> z = 0 unchanged, 1 <= 4 accepted
        assert r1.success and not r1.z_changed_mask.any()
        assert s1.m.tolist() == [1.0] and s1.m_int.tolist() == [0]
        assert s1.log_sigma == pytest.approx(math.log(1.5))
        assert s1.sigma_d.tolist() == [1.0]      # capped at its previous value
        assert r1.f_elite == 1.0 and r1.log_norm_m == 0.0

        s2, r2 = step_lub(s1, p, LEX11, noise([0.1], [0.0]))
        # x = 1 + 1.5 * 0.1 = 1.15, worse than 1
        assert not r2.success and s2.m.tolist() == [1.0]
        assert s2.log_sigma == pytest.approx(math.log(1.5) * 0.75)
        assert s2.sigma_d[0] == pytest.approx(DOWN)
        assert s2.t == 2

    def test_same_noise_lb(self):
        p = params(Variant.LB)
        s1, _ = step_lb(self.start(), p, LEX11, noise([-1.0], [0.3]))
        assert s1.sigma_d[0] == pytest.approx(1.5)
        s2, _ = step_lb(s1, p, LEX11, noise([0.1], [0.0]))
        assert s2.sigma_d[0] == pytest.approx(1.5 * DOWN)
        assert s2.d_scale[0] == pytest.approx(1.0)

    def test_successful_integer_mutation_grows_on_lub(self):
        p = params(Variant.LUB)
        s1, r1 = step_lub(self.start(m_int=1), p, LEX11, noise([5.0], [-1.0]))
        # raw = 1 - 1 + 0.5 = 0.5 -> z = 0; integer part improves so the worse x is accepted
        assert r1.success and r1.z_changed_mask.tolist() == [True]
        assert s1.m.tolist() == [7.0] and s1.m_int.tolist() == [0]
        assert s1.sigma_d[0] == pytest.approx(1.5)

    def test_rejected_integer_change(self):
        p = params(Variant.LUB)
        s1, r1 = step_lub(self.start(), p, LEX11, noise([-1.0], [1.0]))
        # z = floor(1.5) = 1 is worse on the integer part
        assert not r1.success and r1.z_changed_mask.tolist() == [True]
        assert s1.m_int.tolist() == [0]

    def test_floor_holds_exactly(self):
        p = params(Variant.LUB, lb=0.3)
        state = self.start()
        for _ in range(40):
            state, rec = step(state, p, LEX11, noise([10.0], [0.0]))
            assert not rec.success
        assert state.sigma_d[0] == 0.3
        assert state.log_sigma == pytest.approx(40 * math.log(DOWN))

    def test_lub_floor_can_exceed_previous_value(self):
        # with sigma_d below the margin the floor wins over the cap
        p = params(Variant.LUB, lb=0.5)
        s0 = StrategyState(np.array([2.0]), np.array([0]), 0.0, np.array([0.1]))
        s1, _ = step(s0, p, LEX11, noise([-1.0], [0.0]))
        assert s1.sigma_d[0] == 0.5

    def test_variant_checks(self):
        with pytest.raises(ContractError):
            step_lb(self.start(), params(Variant.LUB), LEX11, noise([0.0], [0.0]))
        with pytest.raises(ContractError):
            step_lub(self.start(), params(Variant.LB), LEX11, noise([0.0], [0.0]))

    def test_dimension_checks(self):
        with pytest.raises(ContractError):
            step(self.start(), params(Variant.LB), LEX11, noise([0.0, 0.0], [0.0]))
        with pytest.raises(ContractError):
            step(self.start(), params(Variant.LB), ProblemSpec("SphereInt", 2, 1), noise([0.0], [0.0]))

    def test_unrepresentable_integer(self):
        s0 = StrategyState(np.array([1.0]), np.array([0]), 0.0, np.array([1e300]))
        with pytest.raises(ContractError):
            step(s0, params(Variant.LB), LEX11, noise([0.0], [1.0]))

    def test_sphere_int_ranking(self):
        spec = ProblemSpec(ProblemKind.SPHERE_INT, 1, 1)
        s0 = init_state([0.1], [1], 1.0)
        s1, r1 = step(s0, params(Variant.LB), spec, noise([2.0], [-1.0]))
        # candidate (2.1, 0): 4.41 > 1.01 rejected under the summed value
        assert not r1.success


@st.composite
def noise_rows(draw, dco, din, n):
    k = draw(st.integers(0, 2**32 - 1))
    return np.random.default_rng(k).standard_normal((n, dco + din)) * draw(st.sampled_from([0.3, 1.0, 3.0]))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([Variant.LB, Variant.LUB]), st.sampled_from(list(ProblemKind)),
       noise_rows(3, 4, 60), st.floats(0.01, 2.0))
def test_invariants_along_random_paths(variant, kind, rows, lb):
    spec = ProblemSpec(kind, 3, 4)
    p = StrategyParams(alpha=A, s=4.0, sigma_lb=lb, variant=variant)
    state = init_state([1.0, -2.0, 0.5], [1, 0, -2, 3], 1.0)
    n_up = n_down = 0
    f_prev = float(state.m @ state.m + state.m_int @ state.m_int)
    lex_prev = (float(state.m_int @ state.m_int), float(state.m @ state.m))
    for row in rows:
        prev = state
        state, rec = step(state, p, spec, NoiseDraw(row[:3], row[3:]))
        n_up += rec.success
        n_down += not rec.success
        assert np.all(state.sigma_d >= lb)
        assert state.m_int.dtype == np.int64
        if variant is Variant.LUB:
            allowed = np.where(rec.success & rec.z_changed_mask, A * prev.sigma_d, prev.sigma_d)
            assert np.all(state.sigma_d <= np.maximum(lb, allowed) * (1 + 1e-15))
        if not rec.success:
            assert np.array_equal(state.m, prev.m) and np.array_equal(state.m_int, prev.m_int)
        if kind is ProblemKind.SPHERE_INT:
            assert rec.f_elite <= f_prev
            f_prev = rec.f_elite
        else:
            lex = (float(state.m_int @ state.m_int), float(state.m @ state.m))
            assert lex <= lex_prev
            lex_prev = lex
    expected = n_up * math.log(A) - n_down * math.log(A) / 3.0
    assert state.log_sigma == pytest.approx(expected, abs=1e-12)


class TestRun:
    spec = ProblemSpec(ProblemKind.LEXICO_SPHERE_INT, 5, 5)

    def state0(self):
        return init_state(np.linspace(1, 3, 5), np.zeros(5, int), 1.0)

    def test_row_count_and_initial_row(self):
        tr = run(self.state0(), params(Variant.LUB), self.spec, 3, 100)
        assert len(tr) == 101 and tr.t.tolist() == list(range(101))
        assert tr.log_sigma[0] == 0.0 and tr.sigma_d_min[0] == 1.0 and not tr.success[0]
        assert tr.budget_used == 100 and not tr.hit
        assert tr.final_state.t == 100

    def test_deterministic(self):
        a = run(self.state0(), params(Variant.LB), self.spec, 11, 500)
        b = run(self.state0(), params(Variant.LB), self.spec, 11, 500)
        for col in ("success", "z_changed_any", "log_norm_m", "log_sigma", "sigma_d_min", "f_elite"):
            assert np.array_equal(getattr(a, col), getattr(b, col))
        c = run(self.state0(), params(Variant.LB), self.spec, 11, 500, run_index=1)
        assert not np.array_equal(a.log_norm_m, c.log_norm_m)

    def test_reproducible_across_chunk_boundary(self):
        long = run(self.state0(), params(Variant.LUB), self.spec, 2, 5000)
        short = run(self.state0(), params(Variant.LUB), self.spec, 2, 3000)
        assert np.array_equal(long.log_norm_m[:3001], short.log_norm_m)

    def test_stops_at_epsilon(self):
        tr = run(self.state0(), params(Variant.LUB), self.spec, 0, 50_000, epsilon=1e-3)
        assert tr.hit and tr.hit_t == len(tr) - 1
        assert tr.log10_norm_m[-1] <= -3 and np.all(tr.log10_norm_m[:-1] > -3)

    def test_hit_at_t0(self):
        s0 = init_state(np.full(5, 1e-9), np.zeros(5, int), 1.0)
        tr = run(s0, params(Variant.LUB), self.spec, 0, 10, epsilon=1e-3)
        assert tr.hit_t == 0 and len(tr) == 1

    def test_continuous_only(self):
        spec = ProblemSpec(ProblemKind.SPHERE_INT, 4, 0)
        tr = run(init_state(np.ones(4), [], 1.0), StrategyParams(), spec, 0, 20)
        assert np.all(np.isinf(tr.sigma_d_min))

    @pytest.mark.parametrize("budget", [0, -1, 2.5])
    def test_bad_budget(self, budget):
        with pytest.raises(ContractError):
            run(self.state0(), params(Variant.LB), self.spec, 0, budget)

    def test_dimension_mismatch(self):
        with pytest.raises(ContractError):
            run(self.state0(), params(Variant.LB), ProblemSpec("SphereInt", 4, 5), 0, 10)
