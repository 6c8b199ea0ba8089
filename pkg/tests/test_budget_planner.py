import math

import mpmath as mp
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from pulsecorr.budget_planner import (
    BudgetRequest,
    UnsupportedModeError,
    adjust_security_parameter,
    effective_length_real,
    fig2_curve,
    log_spaced_grid,
    plan,
    solve_effective_length,
    trace_distance_budget,
)
from pulsecorr.corr_model import CharacterizationRangeError, ExponentialModel, TabulatedModel

from oracles import budget_hp, effective_length_hp

PAPER_MODEL = ExponentialModel(1e-3, 1.0)


def test_zero_tail_gives_zero_budget():
    assert trace_distance_budget(TabulatedModel((0.0,) * 5), 5, 0) == (0.0, False)
    assert trace_distance_budget(PAPER_MODEL, 10, 10) == (0.0, False)


def test_budget_at_69_against_high_precision():
    d, vacuous = trace_distance_budget(PAPER_MODEL, 10**12, 69)
    expected = budget_hp(1e-3, 1, 10**12, 69)
    assert not vacuous
    assert d == pytest.approx(8.35e-11, rel=1e-3)
    assert abs(d - float(expected)) <= 1e-9 * float(expected)


def test_budget_clamps_when_vacuous():
    assert budget_hp(1e-3, 1, 10**12, 0) > 1
    assert trace_distance_budget(PAPER_MODEL, 10**12, 0) == (1.0, True)


def test_budget_matches_table_sum():
    d, vacuous = trace_distance_budget(TabulatedModel((0.04, 0.01, 0.0025)), 3, 1)
    assert d == pytest.approx(math.sqrt(3) * 0.15, rel=1e-14)
    assert not vacuous


def test_budget_propagates_range_error():
    with pytest.raises(CharacterizationRangeError):
        trace_distance_budget(TabulatedModel((0.01,) * 5), 6, 0)


def test_solve_clamps_to_zero():
    model = ExponentialModel(1e-9, 3.0)
    assert effective_length_real(model, 10, 1e-2) < 0
    assert solve_effective_length(model, 10, 1e-2) == 0


def test_solve_paper_point():
    real = effective_length_hp(1e-3, 1, 10**12, 1e-10)
    assert float(real) == pytest.approx(68.64, abs=5e-3)
    assert effective_length_real(PAPER_MODEL, 10**12, 1e-10) == pytest.approx(float(real), rel=1e-12)
    assert solve_effective_length(PAPER_MODEL, 10**12, 1e-10) == 69
    assert budget_hp(1e-3, 1, 10**12, 69) <= mp.mpf("1e-10") < budget_hp(1e-3, 1, 10**12, 68)


def test_solve_ceiling_case():
    real = effective_length_hp(1e-3, 1, 10**10, 1e-10)
    assert float(real) == pytest.approx(64.03, abs=1e-2)
    # the real solution sits above 64, so 64 itself misses the target
    assert budget_hp(1e-3, 1, 10**10, 64) > mp.mpf("1e-10")
    assert solve_effective_length(PAPER_MODEL, 10**10, 1e-10) == 65


def test_solve_never_exceeds_N():
    model = ExponentialModel(0.5, 1e-6)
    assert solve_effective_length(model, 3, 1e-12) == 3


def test_solve_rejects_table():
    with pytest.raises(UnsupportedModeError):
        solve_effective_length(TabulatedModel((0.1,)), 1, 0.5)


@pytest.mark.parametrize("eps_sec, d, expected", [(1e-10, 0.0, 1e-10), (1e-10, 1e-10, 3e-10), (0.3, 1.0, 2.3)])
def test_adjust_security_parameter(eps_sec, d, expected):
    assert adjust_security_parameter(eps_sec, d) == eps_sec + 2 * d
    assert adjust_security_parameter(eps_sec, d) == pytest.approx(expected, rel=1e-15)


def test_adjust_returns_eps_sec_unchanged_for_zero_d():
    assert adjust_security_parameter(1.2345e-9, 0.0) == 1.2345e-9


@pytest.mark.parametrize("eps_sec, d", [(0.0, 0.1), (1.0, 0.1), (0.1, -0.1), (0.1, 1.5)])
def test_adjust_rejects_out_of_range(eps_sec, d):
    with pytest.raises(ValueError):
        adjust_security_parameter(eps_sec, d)


def test_plan_uncorrelated():
    result = plan(BudgetRequest(N=1, model=TabulatedModel((0.0,)), eps_sec=1e-10, l_e=0))
    assert result.d == 0.0
    assert result.eps_total == 1e-10
    assert not result.vacuous


def test_plan_paper_point():
    result = plan(BudgetRequest(N=10**12, model=PAPER_MODEL, eps_sec=1e-10, target_d=1e-10))
    assert result.l_e == 69
    assert result.d == pytest.approx(float(budget_hp(1e-3, 1, 10**12, 69)), rel=1e-9)
    assert result.eps_total == pytest.approx(2.67e-10, rel=1e-3)
    assert result.eps_total == 1e-10 + 2 * result.d
    assert result.d == pytest.approx(math.sqrt(result.N) * result.sqrt_delta_le, rel=1e-14)


def test_plan_short_table_fixed_length():
    with pytest.raises(CharacterizationRangeError):
        plan(BudgetRequest(N=10**6, model=TabulatedModel((1e-3,) * 100), eps_sec=1e-10, l_e=10))


def test_plan_table_with_target_is_unsupported():
    with pytest.raises(UnsupportedModeError, match="unsupported mode"):
        plan(BudgetRequest(N=10, model=TabulatedModel((1e-3,) * 10), eps_sec=1e-10, target_d=1e-3))


@pytest.mark.parametrize("kwargs", [
    dict(N=0, eps_sec=1e-10, l_e=1),
    dict(N=10, eps_sec=0.0, l_e=1),
    dict(N=10, eps_sec=1e-10),
    dict(N=10, eps_sec=1e-10, l_e=1, target_d=1e-3),
    dict(N=10, eps_sec=1e-10, target_d=1.0),
    dict(N=10, eps_sec=1e-10, l_e=-1),
])
def test_request_validation(kwargs):
    with pytest.raises(ValueError):
        BudgetRequest(model=PAPER_MODEL, **kwargs)


def test_plan_vacuous_flag():
    result = plan(BudgetRequest(N=10**12, model=PAPER_MODEL, eps_sec=1e-10, l_e=0))
    assert result.vacuous and result.d == 1.0
    assert result.eps_total == 1e-10 + 2.0
    assert not result.has_security_claim


def test_fig2_single_point():
    curve = fig2_curve(PAPER_MODEL, 1e-10, [10**9])
    assert curve.points == ((10**9, solve_effective_length(PAPER_MODEL, 10**9, 1e-10)),)


def test_fig2_monotone_and_ordered():
    grid = log_spaced_grid(1e6, 1e12, 4)
    slow = fig2_curve(ExponentialModel(1e-3, 0.2), 1e-10, grid)
    fast = fig2_curve(ExponentialModel(1e-3, 1.0), 1e-10, grid)
    for curve in (slow, fast):
        assert all(a <= b for a, b in zip(curve.l_e, curve.l_e[1:]))
    assert all(s >= f for s, f in zip(slow.l_e, fast.l_e))


def test_fig2_rejects_bad_grid():
    with pytest.raises(ValueError):
        fig2_curve(PAPER_MODEL, 1e-10, [])
    with pytest.raises(ValueError):
        fig2_curve(PAPER_MODEL, 1e-10, [10, 10])


def test_log_spaced_grid():
    assert log_spaced_grid(1e6, 1e12, 1) == [10**k for k in range(6, 13)]
    assert log_spaced_grid(100, 100, 5) == [100]
    assert log_spaced_grid(1e6, 1e5, 5) == []


models = st.builds(ExponentialModel, st.floats(1e-9, 1.0), st.floats(1e-3, 10.0))


@settings(max_examples=300, deadline=None)
@given(model=models, N=st.integers(1, 10**15), target=st.floats(1e-20, 0.99))
def test_round_trip_and_minimality(model, N, target):
    l_e = solve_effective_length(model, N, target)
    assert trace_distance_budget(model, N, l_e)[0] <= target
    if l_e > 0:
        assert trace_distance_budget(model, N, l_e - 1)[0] > target


@settings(max_examples=200, deadline=None)
@given(model=models, N=st.integers(1, 10**15), l_e=st.integers(0, 10**4))
def test_budget_monotone(model, N, l_e):
    d = trace_distance_budget(model, N, l_e)[0]
    assert trace_distance_budget(model, N, l_e + 1)[0] <= d
    assert trace_distance_budget(model, N + 1, l_e)[0] >= d


@settings(max_examples=200, deadline=None)
@given(e1=st.floats(1e-9, 1.0), C=st.floats(1e-3, 10.0), N=st.integers(1, 10**15),
       target=st.floats(1e-20, 0.5), factor=st.floats(1.0, 100.0))
def test_solution_monotone(e1, C, N, target, factor):
    model = ExponentialModel(e1, C)
    l_e = solve_effective_length(model, N, target)
    assert solve_effective_length(model, N * 2, target) >= l_e
    assert solve_effective_length(model, N, min(0.99, target * factor)) <= l_e
    assert solve_effective_length(ExponentialModel(e1, C * factor), N, target) <= l_e


@settings(max_examples=100, deadline=None)
@given(eps_sec=st.floats(1e-30, 0.99), N=st.integers(1, 50), l_e=st.integers(0, 60))
def test_degenerate_reduction(eps_sec, N, l_e):
    result = plan(BudgetRequest(N=N, model=TabulatedModel((0.0,) * 50), eps_sec=eps_sec, l_e=l_e))
    assert result.d == 0.0 and result.eps_total == eps_sec


@pytest.mark.parametrize("N", [10**18, 10**12])
@pytest.mark.parametrize("d", [1e-30, 1e-10])
@pytest.mark.parametrize("C", [1e-6, 1.0])
def test_extreme_inputs_stay_finite(N, d, C):
    model = ExponentialModel(1e-3, C)
    real = effective_length_real(model, N, d)
    assert math.isfinite(real)
    assert real == pytest.approx(float(effective_length_hp(1e-3, C, N, d)), rel=1e-9)
    l_e = solve_effective_length(model, N, d)
    assert trace_distance_budget(model, N, l_e)[0] <= d


def test_plan_invariants_random_points():
    for N, target in [(10**6, 1e-6), (10**9, 1e-12), (12345, 0.3)]:
        result = plan(BudgetRequest(N=N, model=PAPER_MODEL, eps_sec=1e-9, target_d=target))
        raw = math.sqrt(result.N) * result.sqrt_delta_le
        assert result.d == pytest.approx(min(1.0, raw), rel=1e-13)
        assert result.vacuous == (raw >= 1)
