import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from degchain import (
    GrowthModel,
    NonPositive,
    Unsupported,
    continuum_trajectory,
    master_equation_pk,
    mean_field_pk,
    power_model_prediction,
    total_degree,
)


def test_mean_field_values():
    assert mean_field_pk(3, 3) == pytest.approx(18 / 27)
    assert mean_field_pk(1, 1) == 2.0
    assert mean_field_pk(2, 10) / mean_field_pk(2, 5) == pytest.approx(1 / 8)


def test_master_equation_values():
    assert master_equation_pk(1, 1) == pytest.approx(4 / 6)
    assert master_equation_pk(3, 3) == pytest.approx(0.4)


@pytest.mark.parametrize("m", [1, 2, 3, 5])
def test_master_equation_sums_to_one(m):
    K = 10**6
    k = np.arange(m, K + 1, dtype=float)
    partial = math.fsum(2.0 * m * (m + 1) / (k * (k + 1) * (k + 2)))
    # partial fractions telescope to 1 - m(m+1)/((K+1)(K+2))
    assert partial == pytest.approx(1 - m * (m + 1) / ((K + 1) * (K + 2)), abs=1e-12)
    assert abs(partial - 1) < 1e-5


def test_master_equation_partial_sums_increase():
    sums = np.cumsum([master_equation_pk(2, k) for k in range(2, 200)])
    assert (np.diff(sums) > 0).all() and sums[-1] < 1


@pytest.mark.parametrize("m", [1, 3, 7])
def test_tail_ratio(m):
    k = 1e6
    assert master_equation_pk(m, k) / mean_field_pk(m, k) == pytest.approx((m + 1) / m, rel=1e-5)


def test_rejects_small_k():
    with pytest.raises(ValueError):
        master_equation_pk(3, 2)


class TestPowerPrediction:
    def test_theta_02(self):
        p = power_model_prediction(3, 0.2)
        assert p.gamma == pytest.approx(3.5)
        assert p.z == pytest.approx(0.5)
        assert p.beta == pytest.approx(0.4)
        assert p.c == pytest.approx(2.5 * 3**2.5)

    def test_ba_limit(self):
        p = power_model_prediction(2, 0.0)
        assert (p.gamma, p.z, p.beta, p.c) == (3.0, 0.0, 0.5, 8.0)

    def test_theta_half(self):
        p = power_model_prediction(1, 0.5)
        assert p.gamma == pytest.approx(5.0)
        assert p.z == pytest.approx(2.0)

    def test_coefficient_at(self):
        p = power_model_prediction(1, 0.2)
        assert p.coefficient_at(10_000) == pytest.approx(p.c * 100)

    @given(st.floats(0.0, 0.99))
    def test_invariants_and_continuity(self, theta):
        p = power_model_prediction(2, theta)
        q = power_model_prediction(2, min(theta + 1e-9, 0.999))
        assert p.gamma > 1 and p.c > 0 and p.z >= 0 and 0 < p.beta <= 1
        assert abs(p.gamma - q.gamma) < 1e-3


class TestTotalDegree:
    def test_constant(self):
        assert total_degree(GrowthModel.constant(3), 100) == 600

    def test_power(self):
        assert total_degree(GrowthModel.power(1, 0.2), 1) == pytest.approx(2 / 1.2)

    def test_log(self):
        assert total_degree(GrowthModel.logarithmic(1), math.e**2) == pytest.approx(2 * math.e**2)
        assert total_degree(GrowthModel.logarithmic(1), math.e**2) == pytest.approx(14.778, abs=1e-3)

    def test_log_nonpositive(self):
        with pytest.raises(NonPositive):
            total_degree(GrowthModel.logarithmic(1), 2)


class TestTrajectory:
    def test_boundary(self):
        assert continuum_trajectory(GrowthModel.constant(2), 50, 50) == 2

    def test_constant(self):
        assert continuum_trajectory(GrowthModel.constant(1), 100, 10_000) == pytest.approx(10)

    def test_power_boundary(self):
        t = 777
        assert continuum_trajectory(GrowthModel.power(1, 0.2), t, t) == pytest.approx(t**0.2)

    def test_log_unsupported(self):
        with pytest.raises(Unsupported):
            continuum_trajectory(GrowthModel.logarithmic(1), 10, 100)
