import numpy as np
import pytest

from rgcast import PastHistory, evaluate, fit
from rgcast.interpolation import NODE_TOLERANCE

from conftest import random_history


def history(points):
    times, values = zip(*points)
    return PastHistory(times=times, values=values, anchor_index=0)


def test_constant_history_zero_higher_coefficients():
    result = fit(history([(0.0, 5.0), (-1.0, 5.0), (-2.0, 5.0)]))
    assert result.coefficients == (5.0, 0.0, 0.0)


def test_two_point_hand_solve():
    # 2 + a1*(-1) = 1  =>  a1 = 1
    result = fit(history([(0.0, 2.0), (-1.0, 1.0)]))
    assert result.coefficients == (2.0, 1.0)


def test_three_point_hand_solve():
    # f(t) = 1 + t^2 passes through (0,1), (-1,2), (-2,5)
    result = fit(history([(0.0, 1.0), (-1.0, 2.0), (-2.0, 5.0)]))
    assert result.coefficients == pytest.approx((1.0, 0.0, 1.0), abs=1e-12)


def test_evaluate_examples():
    quadratic = fit(history([(0.0, 1.0), (-1.0, 2.0), (-2.0, 5.0)]))
    assert evaluate(quadratic, -2.0) == pytest.approx(5.0, rel=1e-12)
    constant = fit(history([(0.0, 5.0), (-1.0, 5.0), (-2.0, 5.0)]))
    assert evaluate(constant, 7.0) == 5.0
    assert evaluate(quadratic, 0.0) == quadratic.coefficients[0]


def test_anchor_coefficient_is_pinned():
    rng = np.random.default_rng(3)
    for _ in range(50):
        h = random_history(rng, k=int(rng.integers(1, 7)))
        assert fit(h).coefficients[0] == h.values[0]


def test_degree_minimality():
    rng = np.random.default_rng(4)
    for k in range(1, 7):
        assert len(fit(random_history(rng, k=k)).coefficients) == k + 1


def test_node_exactness_random_histories():
    rng = np.random.default_rng(5)
    worst = 0.0
    for _ in range(400):
        k = int(rng.integers(1, 7))
        name = rng.choice(["A", "B", "C"])
        h = random_history(rng, k=k, sequence_name=name)
        result = fit(h)
        for t, f in h.points:
            worst = max(worst, abs(evaluate(result, t) - f) / abs(f))
    assert worst <= NODE_TOLERANCE


def test_linearity_in_data():
    rng = np.random.default_rng(6)
    for _ in range(50):
        h = random_history(rng, k=int(rng.integers(1, 7)))
        lam = float(rng.uniform(0.1, 10.0))
        scaled = PastHistory(
            times=h.times,
            values=tuple(lam * v for v in h.values),
            anchor_index=h.anchor_index,
        )
        base = fit(h).coefficients
        got = fit(scaled).coefficients
        for b, g in zip(base, got):
            assert g == pytest.approx(lam * b, rel=1e-12, abs=1e-12)


def test_single_point_degenerate_constant():
    h = PastHistory(times=(0.0,), values=(3.5,), anchor_index=0)
    assert fit(h).coefficients == (3.5,)
