import numpy as np
import pytest

from dncone import (
    ConditionViolation,
    DerivativeUnavailable,
    DomainError,
    ExpFamily,
    GridSpec,
    PowerShift,
    PurePower,
    Tabulated,
    classify_against_exceptional_set,
    critical_threshold,
    derivative_sign_scan,
    exceptional_set,
    exceptional_set_scan,
    family_exponent_scan,
    mw_preserves,
)


def test_integer_power_scans_clean():
    res = derivative_sign_scan(PurePower(2.0), 4)
    assert res.all_nonneg and res.first_violation is None
    assert res.orders_checked == 3
    assert "grid" in res.grid or "pts" in res.grid


def test_fractional_power_violates_at_third_order():
    # 1.5 * 0.5 * (-0.5) < 0 makes the third derivative negative
    res = derivative_sign_scan(PurePower(1.5), 4)
    assert not res.all_nonneg
    assert res.first_violation.order == 3
    assert res.first_violation.value < 0


def test_power_shift_below_threshold_violates():
    # alpha = 2.5 < n-2+beta = 3 and 2.5 is not in {1, 2}
    res = derivative_sign_scan(PowerShift(2.5, 1.0, 1.0), 4)
    assert not res.all_nonneg
    assert res.first_violation.order <= 3


def test_threshold_sharpness():
    for n in range(3, 9):
        assert derivative_sign_scan(PurePower(float(n - 2)), n).all_nonneg
        assert not derivative_sign_scan(PurePower(n - 2 - 1e-3), n).all_nonneg


def test_scan_requires_derivatives():
    with pytest.raises(DerivativeUnavailable):
        derivative_sign_scan(Tabulated((0.0, 1.0), (0.0, 1.0)), 3)
    with pytest.raises(DomainError):
        derivative_sign_scan(PurePower(1.0), 1)


def test_grid_spec_is_overridable():
    grid = GridSpec(log_points=50, log_lo=1e-4, log_hi=1e4, lin_points=10)
    xs = grid.build()
    assert xs[0] == 1e-4 and xs[-1] == 1e4
    res = derivative_sign_scan(PurePower(1.5), 4, grid=grid)
    assert not res.all_nonneg


def test_mw_preserves_differentiable_routes():
    for n in (3, 4, 6):
        assert mw_preserves(PurePower(float(n - 2)), n).all_nonneg
    res = mw_preserves(PurePower(0.5), 3)
    assert not res.all_nonneg
    assert mw_preserves(ExpFamily.exp(), 8).all_nonneg


def test_mw_preserves_tabulated_sampler():
    xs = np.linspace(0.0, 4.0, 9)
    convex = Tabulated(tuple(xs), tuple(xs**2))
    res = mw_preserves(convex, 3, node_budget=500, seed=3)
    assert res.all_nonneg
    assert "necessary condition" in res.grid
    concave = Tabulated(tuple(xs), tuple(np.sqrt(xs)))
    res = mw_preserves(concave, 3, node_budget=500, seed=3)
    assert not res.all_nonneg
    assert res.first_violation.order == 2


def test_mw_rejects_negative_functions():
    dip = ExpFamily("dip", lambda x, k: np.cos(x) + 0.5 if k == 0 else -np.sin(x))
    with pytest.raises(DomainError):
        mw_preserves(dip, 3)


def test_exceptional_set_values():
    assert list(exceptional_set(5, 0.0)) == [0.0, 1.0, 2.0]
    assert list(exceptional_set(4, 1.5)) == [1.5, 2.5]
    assert list(exceptional_set(4, -2.0)) == [0.0, 1.0]
    assert exceptional_set(2, 1.0).size == 0
    assert critical_threshold(5, 1.0) == 4.0


def test_exceptional_scan_classification_beta_zero():
    results = exceptional_set_scan(0.0, 1.0, 5, [0.0, 1.0, 2.0, 3.0, 2.5])
    verdicts = {alpha: res.all_nonneg for alpha, res in results}
    assert verdicts == {0.0: True, 1.0: True, 2.0: True, 3.0: True, 2.5: False}
    rep = classify_against_exceptional_set(results, 5, 0.0)
    assert rep.consistent


def test_exceptional_scan_power_shift_examples():
    results = exceptional_set_scan(1.0, 1.0, 4, [3.0])
    assert results[0][1].all_nonneg  # 3 = n-2+beta
    results = exceptional_set_scan(1.0, 1.0, 4, [0.5])
    assert not results[0][1].all_nonneg  # 0.5 not in {1, 2} and below 3


def test_classification_flags_strays():
    # a clean scan mislabeled as alpha=1.5 must be flagged: 1.5 is below the
    # n=4 threshold and not an exceptional value
    fake = [(1.5, derivative_sign_scan(PurePower(2.0), 4))]
    rep = classify_against_exceptional_set(fake, 4, 0.0)
    assert not rep.consistent and rep.stray_preserving == (1.5,)
    # a violation mislabeled as alpha=2.5 (above threshold) must be flagged too
    fake = [(2.5, derivative_sign_scan(PurePower(1.5), 4))]
    rep = classify_against_exceptional_set(fake, 4, 0.0)
    assert not rep.consistent and rep.above_threshold_failures == (2.5,)


def test_family_scan_exp_examples():
    results = dict(
        (a, r.all_nonneg)
        for a, r in family_exponent_scan(ExpFamily.exp(), 4, [1.5, 2.0, 3.0, 0.5])
    )
    assert results == {1.5: False, 2.0: True, 3.0: True, 0.5: False}


def test_family_scan_cosh_integer_preserves():
    results = family_exponent_scan(ExpFamily.cosh(), 3, [1.0])
    assert results[0][1].all_nonneg


def test_family_scan_rejects_bad_functions():
    dip = ExpFamily("dip", lambda x, k: np.where(x < 5.0, 1.0, -1.0) if k == 0 else np.zeros_like(x))
    with pytest.raises(ConditionViolation):
        family_exponent_scan(dip, 3, [1.0])
    decreasing = ExpFamily("dec", lambda x, k: np.exp(-x) * ((-1.0) ** k))
    with pytest.raises(ConditionViolation):
        family_exponent_scan(decreasing, 3, [1.0])
    with pytest.raises(DomainError):
        family_exponent_scan(PurePower(1.0), 3, [1.0])


def test_family_scan_trims_overflow_region():
    results = family_exponent_scan(ExpFamily.exp(), 3, [2.0])
    assert results[0][1].all_nonneg
    assert "trimmed" in results[0][1].grid
