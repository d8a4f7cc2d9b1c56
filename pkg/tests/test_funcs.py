import math

import numpy as np
import pytest

from dncone import (
    DomainError,
    ExpFamily,
    PowerShift,
    PurePower,
    Tabulated,
    func_from_config,
    lemma_derivative,
)
from dncone.funcs import lemma_derivative_terms
from dncone.verify import richardson_derivative


def test_lemma_zeroth_order_is_the_function():
    for alpha, beta, u, x in [(0.5, 1.0, 1.0, 2.0), (3.0, -2.0, 0.7, 0.3)]:
        assert lemma_derivative(alpha, beta, u, 0, x) == pytest.approx(
            x**alpha * (x + u) ** (-beta), rel=1e-15
        )


def test_lemma_known_zero_of_first_derivative():
    # g = sqrt(x)/(x+1): g'(x) = (1-x) / (2 sqrt(x) (x+1)^2) vanishes at x=1
    assert lemma_derivative(0.5, 1.0, 1.0, 1, 1.0) == 0.0
    assert lemma_derivative(0.5, 1.0, 1.0, 1, 0.5) == pytest.approx(
        (1 - 0.5) / (2 * math.sqrt(0.5) * 1.5**2), rel=1e-13
    )


def test_lemma_cubic_second_derivative():
    # (x^3)'' = 6x
    assert lemma_derivative(3.0, 0.0, 1.0, 2, 2.0) == pytest.approx(12.0, rel=1e-13)


def test_lemma_vectorized_matches_scalar():
    xs = np.array([0.5, 1.0, 2.5])
    vec = lemma_derivative(1.7, 0.8, 0.9, 3, xs)
    for x, v in zip(xs, vec):
        assert lemma_derivative(1.7, 0.8, 0.9, 3, float(x)) == pytest.approx(v, rel=0, abs=0)


def test_lemma_matches_finite_differences_spot():
    for alpha, beta, u, x, r in [(2.3, 1.1, 0.6, 1.7, 3), (0.9, -2.0, 2.5, 4.0, 5)]:
        fd = richardson_derivative(lambda y: y**alpha * (y + u) ** (-beta), x, r)
        assert lemma_derivative(alpha, beta, u, r, x) == pytest.approx(fd, rel=1e-8)


def test_lemma_integer_degeneracies_are_finite():
    # Gamma-ratio form has poles here; the product form must stay finite
    assert lemma_derivative(2.0, 2.0, 1.0, 3, 1.0) == pytest.approx(
        richardson_derivative(lambda y: y**2 * (y + 1.0) ** (-2.0), 1.0, 3), rel=1e-9
    )
    assert np.isfinite(lemma_derivative(1.0, 1.0, 1.0, 2, 0.5))


def test_lemma_guards():
    with pytest.raises(DomainError):
        lemma_derivative(1.0, 1.0, 0.0, 1, 1.0)  # u must be positive
    with pytest.raises(DomainError):
        lemma_derivative(1.0, 1.0, 1.0, 1, 0.0)  # x must be positive
    with pytest.raises(DomainError):
        lemma_derivative(1.0, 1.0, 1.0, 33, 1.0)  # order cap
    with pytest.raises(OverflowError):
        lemma_derivative(200.0, -200.0, 5.0, 30, 9.9)


def test_lemma_scale_tracks_largest_term():
    value, scale = lemma_derivative_terms(2.0, 1.0, 1.0, 2, np.array([1.0]))
    assert scale[0] > 0
    assert abs(value[0]) <= 3.0 * scale[0]


def test_pure_power_values_and_derivatives():
    f = PurePower(0.5)
    assert f.value(4.0) == 2.0
    assert f.value(0.0) == 0.0
    assert PurePower(0.0).value(0.0) == 1.0
    assert f.derivative(np.array([1.0]), 1)[0] == 0.5
    # derivative of x^2 of order 3 vanishes identically
    assert PurePower(2.0).derivative(np.array([5.0]), 3)[0] == 0.0
    with pytest.raises(DomainError):
        PurePower(-0.5)
    with pytest.raises(DomainError):
        f.derivative(np.array([0.0]), 1)  # sqrt derivative unbounded at 0


def test_power_shift_values():
    f = PowerShift(0.0, 2.0, 1.0)
    assert f.value(0.0) == 1.0
    f = PowerShift(1.5, 1.0, 2.0)
    assert f.value(1.0) == pytest.approx(1.0 / 3.0, rel=1e-15)
    with pytest.raises(DomainError):
        PowerShift(1.0, 1.0, 0.0)


def test_exp_family_oracles():
    f = ExpFamily.exp()
    assert f.value(1.0) == pytest.approx(math.e)
    assert f.derivative(np.array([2.0]), 5)[0] == pytest.approx(math.exp(2.0))
    g = ExpFamily.cosh()
    assert g.derivative(np.array([1.0]), 1)[0] == pytest.approx(math.sinh(1.0))
    assert g.derivative(np.array([1.0]), 2)[0] == pytest.approx(math.cosh(1.0))


def test_tabulated_validation_and_interp():
    t = Tabulated((0.0, 1.0, 2.0), (0.0, 1.0, 4.0))
    assert t.value(0.5) == 0.5
    assert t.value(1.5) == 2.5
    assert not t.supports_derivatives
    with pytest.raises(DomainError):
        Tabulated((1.0, 0.0), (1.0, 1.0))  # unsorted
    with pytest.raises(DomainError):
        Tabulated((0.0, 1.0), (1.0, -1.0))  # negative value
    with pytest.raises(DomainError):
        Tabulated((0.0, 1.0), (1.0,))  # shape mismatch


def test_func_config_round_trip():
    for f in [PurePower(2.5), PowerShift(1.0, 0.5, 2.0), ExpFamily.exp(), ExpFamily.cosh(),
              Tabulated((0.0, 1.0), (1.0, 2.0))]:
        g = func_from_config(f.to_config())
        assert g.to_config() == f.to_config()
        assert g.describe() == f.describe()
