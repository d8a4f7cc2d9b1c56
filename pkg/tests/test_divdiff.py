import math

import numpy as np
import pytest

from dncone import (
    DerivativeUnavailable,
    DomainError,
    IllConditioned,
    PowerShift,
    PurePower,
    Tabulated,
    divided_differences,
)
from dncone.rng import SplitMix64


def test_quadratic_leading_coefficient():
    table = divided_differences(PurePower(2.0), [0.0, 1.0, 2.0])
    assert table.entry(0, 2) == pytest.approx(1.0, abs=1e-14)
    assert table.entry(0, 1) == pytest.approx(1.0, abs=1e-14)  # (1-0)/(1-0)


def test_constant_function_higher_orders_vanish():
    table = divided_differences(Tabulated((0.0, 1.0, 2.0, 3.0), (5.0, 5.0, 5.0, 5.0)),
                                [0.0, 1.0, 2.0, 3.0])
    for j in range(1, 4):
        assert np.max(np.abs(table.order_entries(j))) == 0.0


def test_coincident_nodes_use_the_derivative():
    table = divided_differences(PurePower(0.5), [1.0, 1.0])
    assert table.entry(0, 1) == pytest.approx(0.5, abs=1e-15)
    table = divided_differences(PurePower(3.0), [2.0, 2.0, 2.0])
    assert table.entry(0, 2) == pytest.approx(6 * 2.0 / 2.0, abs=1e-12)  # f''(2)/2!


def test_mixed_confluent_table():
    # (1, 1, 2): entry (0,1) is f'(1), entry (0,2) the usual recurrence
    f = PowerShift(2.0, 1.0, 1.0)
    table = divided_differences(f, [1.0, 1.0, 2.0])
    assert table.entry(0, 1) == pytest.approx(float(f.derivative(np.array([1.0]), 1)[0]), rel=1e-13)
    expected = (table.entry(1, 1) - table.entry(0, 1)) / (2.0 - 1.0)
    assert table.entry(0, 2) == pytest.approx(expected, rel=1e-13)


def test_polynomial_annihilation_property():
    rng = SplitMix64(55)
    for _ in range(50):
        deg = 1 + rng.randint(4)
        nodes = np.sort(rng.uniforms(deg + 2) * 10.0)
        if np.min(np.diff(nodes)) < 1e-6:
            continue
        table = divided_differences(PurePower(float(deg)), nodes)
        scale = max(1.0, float(np.max(np.abs(table.order_entries(0)))))
        assert abs(table.entry(0, deg + 1)) <= 1e-8 * scale


def test_mean_value_bridge():
    # every order-k entry lies between min and max of f^(k)/k! on the hull
    f = PowerShift(2.5, 1.0, 1.0)
    rng = SplitMix64(56)
    for _ in range(20):
        nodes = np.sort(0.5 + 4.0 * rng.uniforms(4))
        if np.min(np.diff(nodes)) < 1e-6:
            continue
        table = divided_differences(f, nodes)
        xs = np.linspace(nodes[0], nodes[-1], 2001)
        for j in range(1, 4):
            dj = f.derivative(xs, j) / math.factorial(j)
            lo, hi = float(np.min(dj)), float(np.max(dj))
            pad = 1e-9 * max(1.0, abs(lo), abs(hi))
            for entry in table.order_entries(j):
                assert lo - pad <= entry <= hi + pad


def test_tabulated_repeated_nodes_fail_cleanly():
    t = Tabulated((0.0, 1.0, 2.0), (1.0, 2.0, 3.0))
    with pytest.raises(DerivativeUnavailable):
        divided_differences(t, [1.0, 1.0])


def test_nearly_coincident_nodes_without_derivatives():
    t = Tabulated((0.0, 1.0, 1.0 + 1e-13, 2.0), (1.0, 2.0, 2.0, 3.0))
    with pytest.raises(IllConditioned):
        divided_differences(t, [1.0, 1.0 + 1e-13])


def test_node_validation():
    with pytest.raises(DomainError):
        divided_differences(PurePower(1.0), [-1.0, 0.0])
    with pytest.raises(DomainError):
        divided_differences(PurePower(1.0), [2.0, 1.0])
