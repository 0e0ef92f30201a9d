import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from augur.ski_rental import (NEVER, LambdaRobust, RentThenBuy, SkiInstance, TrustPrediction,
                              competitive_ratio_bound, cost, lambda_robust_grid, verify_grid)


def test_season_ends_before_purchase():
    inst = SkiInstance(10, 5)
    assert cost(inst, RentThenBuy(6)) == 5 == inst.opt
    assert cost(inst, RentThenBuy(NEVER)) == 5


def test_break_even_policy():
    assert cost(SkiInstance(10, 100, 100), LambdaRobust(1.0)) == 19


def test_trusting_lambda_half():
    inst = SkiInstance(10, 100, 100)
    assert LambdaRobust(0.5).buy_day(inst) == 5
    assert cost(inst, LambdaRobust(0.5)) == 14
    assert cost(inst, LambdaRobust(0.5)) / inst.opt <= 1.5


def test_bound_examples():
    assert competitive_ratio_bound(10, 100, 100, 0.25) == 1.25
    assert competitive_ratio_bound(10, 100, 5, 0.5) == 3.0
    for h in (1, 5, 50, 500):
        assert competitive_ratio_bound(10, 20, h, 0.25) <= 5


def test_trust_prediction():
    assert cost(SkiInstance(10, 3, 50), TrustPrediction()) == 10
    assert cost(SkiInstance(10, 50, 3), TrustPrediction()) == 50


def test_fraction_ceiling():
    # 0.3 * 10 is 3.0000000000000004 in floating point
    assert LambdaRobust(0.3).buy_day(SkiInstance(10, 100, 100)) == 3


def test_invalid_inputs():
    with pytest.raises(ValueError):
        LambdaRobust(0.0)
    with pytest.raises(ValueError):
        SkiInstance(0, 5)
    with pytest.raises(ValueError):
        competitive_ratio_bound(10, 5, 5, 1.5)


@given(st.integers(1, 60), st.integers(1, 250), st.integers(0, 250),
       st.sampled_from([0.1, 0.2, 0.25, 0.3, 0.5, 0.7, 0.9, 1.0]))
def test_grid_matches_scalar(b, d, h, lam):
    total, opt, bound = lambda_robust_grid(np.array([b]), np.array([d]), np.array([h]), lam)
    inst = SkiInstance(b, d, h)
    assert total[0] == cost(inst, LambdaRobust(lam))
    assert opt[0] == inst.opt
    assert bound[0] == pytest.approx(competitive_ratio_bound(b, d, h, lam))


@given(st.integers(1, 60), st.integers(1, 250), st.integers(0, 250),
       st.fractions(Fraction(1, 20), Fraction(1)))
def test_bound_holds(b, d, h, lam):
    lam = float(lam)
    inst = SkiInstance(b, d, h)
    assert cost(inst, LambdaRobust(lam)) / inst.opt <= competitive_ratio_bound(b, d, h, lam) + 1e-12


def test_small_exhaustive_grid():
    violations, worst = verify_grid(b_max=10, d_max=40, h_max=40)
    assert violations == 0 and worst < 0


def test_deterministic_break_even_is_2_competitive():
    for b in range(1, 30):
        for d in range(1, 100):
            inst = SkiInstance(b, d)
            assert cost(inst, RentThenBuy(b)) <= 2 * inst.opt
            assert math.isclose(competitive_ratio_bound(b, d, 1, 1.0), 2.0)
