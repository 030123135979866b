import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from degchain import (
    EmptyRange,
    GrowthModel,
    OutOfRangeProbability,
    accumulate_segment,
    default_start,
    degree_distribution,
    evolve_node,
    expected_degree,
    initial_degree,
    segment_plan,
)

import oracles

BA1 = GrowthModel.constant(1)


def as_dense(vec, size):
    out = np.zeros(size)
    out[vec.offset : vec.offset + len(vec)] = vec.values
    return out


class TestEvolveNode:
    def test_no_steps(self):
        v = evolve_node(BA1, 5, 5)
        assert v.offset == 1
        assert v.values.tolist() == [1.0]

    def test_one_step(self):
        v = evolve_node(BA1, 2, 3)
        assert v.offset == 1
        np.testing.assert_allclose(v.values, [0.75, 0.25], rtol=0, atol=1e-15)

    def test_two_steps(self):
        exact = oracles.exact_node(1, 2, 4)
        assert exact == [Fraction(5, 8), Fraction(7, 24), Fraction(1, 12)]
        v = evolve_node(BA1, 2, 4)
        np.testing.assert_allclose(v.values, [float(x) for x in exact], rtol=0, atol=1e-15)

    @pytest.mark.parametrize("m,i,t", [(1, 1, 30), (2, 3, 25), (3, 2, 40), (5, 7, 33)])
    def test_matches_exact_fractions(self, m, i, t):
        exact = [float(x) for x in oracles.exact_node(m, i, t)]
        v = evolve_node(GrowthModel.constant(m), i, t)
        assert v.offset == m
        np.testing.assert_allclose(v.values, exact, rtol=0, atol=1e-14)

    @pytest.mark.parametrize(
        "model,i,t",
        [
            (GrowthModel.power(2, 0.2), 40, 90),
            (GrowthModel.power(1, 0.5), 5, 60),
            (GrowthModel.logarithmic(2), 21, 70),
        ],
    )
    def test_matches_dense_product(self, model, i, t):
        m_i = initial_degree(model, i)
        ref = oracles.dense_node(model.family.value, model.theta, m_i, i, t)
        v = evolve_node(model, i, t)
        np.testing.assert_allclose(as_dense(v, len(ref)), ref, rtol=0, atol=1e-13)

    def test_support_exact(self):
        v = evolve_node(GrowthModel.constant(3), 4, 50)
        assert v.offset == 3 and len(v) == 50 - 4 + 1
        assert (v.values > 0).all()

    def test_truncation_tracks_mass(self):
        v = evolve_node(BA1, 1, 400, eps=1e-8)
        assert len(v) < 400
        assert 0 < v.dropped_mass <= 1e-8
        assert v.total_mass == pytest.approx(1.0, abs=1e-12)
        assert v.values[-1] > 0

    def test_rejects_invalid_start(self):
        with pytest.raises(OutOfRangeProbability):
            evolve_node(GrowthModel.constant(3), 1, 10)

    def test_empty(self):
        with pytest.raises(EmptyRange):
            evolve_node(BA1, 5, 4)


class TestAccumulateSegment:
    def test_single_node(self):
        acc = accumulate_segment(BA1, (5, 5, 1), 5)
        assert acc.values.tolist() == [1.0]

    def test_matches_node_sum(self):
        acc = accumulate_segment(BA1, (3, 6, 1), 40)
        ref = np.zeros(45)
        for i in range(3, 7):
            ref += as_dense(evolve_node(BA1, i, 40), 45)
        np.testing.assert_allclose(as_dense(acc, 45), ref, rtol=0, atol=1e-12)

    def test_mass_additivity(self):
        acc = accumulate_segment(GrowthModel.constant(2), (4, 10, 2), 60)
        assert acc.mass == pytest.approx(7.0, abs=1e-12)

    @pytest.mark.parametrize(
        "model,a,b,t",
        [
            (GrowthModel.power(1, 0.2), 32, 60, 90),
            (GrowthModel.logarithmic(1), 21, 40, 80),
            (GrowthModel.power(3, 0.0), 2, 12, 45),
        ],
    )
    def test_matches_dense_segment(self, model, a, b, t):
        m_seg = initial_degree(model, a)
        assert initial_degree(model, b) == m_seg
        ref = oracles.dense_segment_sum(model.family.value, model.theta, m_seg, a, b, t)
        acc = accumulate_segment(model, (a, b, m_seg), t)
        np.testing.assert_allclose(as_dense(acc, len(ref)), ref, rtol=0, atol=1e-12)

    @given(st.integers(1, 3), st.integers(1, 10), st.data())
    @settings(max_examples=60, deadline=None)
    def test_telescoping_property(self, m, a, data):
        a = max(a, (m + 1) // 2)
        b = data.draw(st.integers(a, 60))
        t = data.draw(st.integers(b, 100))
        model = GrowthModel.constant(m)
        acc = accumulate_segment(model, (a, b, m), t)
        size = m + t - a + 2
        ref = np.zeros(size)
        for i in range(a, b + 1):
            ref += as_dense(evolve_node(model, i, t), size)
        np.testing.assert_allclose(as_dense(acc, size), ref, rtol=0, atol=1e-12)

    def test_truncation_monotone_in_t(self):
        drops = [
            accumulate_segment(BA1, (1, 50, 1), t, eps=1e-6, run_nodes=100).dropped_mass
            for t in range(50, 400, 25)
        ]
        assert all(x <= y for x, y in zip(drops, drops[1:]))
        assert drops[-1] > 0

    def test_empty(self):
        with pytest.raises(EmptyRange):
            accumulate_segment(BA1, (5, 4, 1), 10)


class TestShiftInvariance:
    """e1 P_i(t) ... P_i(t+s) does not depend on the node index i."""

    @pytest.mark.parametrize("family,theta,m", [("constant", 0.0, 1), ("constant", 0.0, 3), ("power", 0.2, 2)])
    def test_dense_matrices(self, family, theta, m):
        t0, steps, size = 12, 15, 60
        results = []
        for i in (2, 5, 9, 12):
            f = np.zeros(size)
            f[m] = 1.0
            for s in range(t0, t0 + steps):
                f = f @ oracles.dense_matrix(family, theta, m, i, s, size)
            results.append(f)
        for f in results[1:]:
            np.testing.assert_array_equal(f, results[0])


class TestDegreeDistribution:
    def test_hand_example(self):
        d = degree_distribution(BA1, 3, S=2, eps=0)
        assert d.entries == [(1, 0.875), (2, 0.125)]

    @pytest.mark.parametrize(
        "model", [GrowthModel.constant(3), GrowthModel.power(2, 0.3), GrowthModel.logarithmic(2)]
    )
    def test_single_node(self, model):
        t = 500
        d = degree_distribution(model, t, S=t)
        assert d.entries == [(initial_degree(model, t), 1.0)]

    def test_normalisation(self):
        d = degree_distribution(GrowthModel.constant(3), 10_000, S=3)
        assert d.p.sum() + d.dropped_mass_fraction == pytest.approx(1.0, abs=1e-9)

    def test_segmented_matches_node_sum(self):
        model = GrowthModel.power(1, 0.5)
        S, t = 3, 60
        d = degree_distribution(model, t, S=S, eps=0)
        assert len(d.plan) > 1
        ref = {}
        for i in range(S, t + 1):
            v = evolve_node(model, i, t)
            for k, p in zip(v.degrees, v.values):
                ref[int(k)] = ref.get(int(k), 0.0) + p / (t - S + 1)
        assert d.k.tolist() == sorted(ref)
        np.testing.assert_allclose(d.p, [ref[k] for k in d.k.tolist()], rtol=0, atol=1e-14)

    def test_power_theta_zero_equals_constant(self):
        a = degree_distribution(GrowthModel.power(3, 0.0), 3000, S=2, eps=0)
        b = degree_distribution(GrowthModel.constant(3), 3000, S=2, eps=0)
        assert a.k.tolist() == b.k.tolist()
        np.testing.assert_allclose(a.p, b.p, rtol=0, atol=1e-12)

    def test_workers_same_result(self):
        model = GrowthModel.power(3, 0.2)
        a = degree_distribution(model, 5000)
        b = degree_distribution(model, 5000, workers=4)
        np.testing.assert_array_equal(a.p, b.p)

    def test_deterministic(self):
        model = GrowthModel.logarithmic(2)
        a = degree_distribution(model, 4000)
        b = degree_distribution(model, 4000)
        assert a.p.tobytes() == b.p.tobytes()

    def test_default_starts(self):
        assert degree_distribution(GrowthModel.power(1, 0.2), 100).S == 32
        assert degree_distribution(GrowthModel.logarithmic(3), 100).S == 21

    def test_log_early_start_refused(self):
        with pytest.raises(OutOfRangeProbability):
            degree_distribution(GrowthModel.logarithmic(3), 100, S=2)

    def test_metadata_segments(self):
        d = degree_distribution(GrowthModel.power(1, 0.2), 200_000)
        assert [s["start"] for s in d.metadata()["segments"]] == [
            32, 243, 1024, 3125, 7776, 16807, 32768, 59049, 100000, 161051]

    @given(
        st.sampled_from(["ba", "power", "log"]),
        st.integers(1, 4),
        st.floats(0.0, 0.5),
        st.integers(0, 3000),
        st.sampled_from([0.0, 1e-12, 1e-10, 1e-6]),
    )
    @settings(max_examples=40, deadline=None)
    def test_mass_and_budget(self, family, m, theta, extra, eps):
        model = GrowthModel(family, m, theta=theta)
        S = default_start(model)
        t = S + extra
        d = degree_distribution(model, t, eps=eps)
        assert abs(d.p.sum() + d.dropped_mass_fraction - 1.0) <= 1e-9
        assert 0.0 <= d.dropped_mass_fraction <= eps
        assert (np.diff(d.k) > 0).all() and (d.p > 0).all()


class TestExpectedDegree:
    def test_one_step(self):
        assert expected_degree(BA1, 4, 5) == pytest.approx(1.125, rel=1e-15)

    @pytest.mark.parametrize("model", [BA1, GrowthModel.power(2, 0.2), GrowthModel.logarithmic(1)])
    def test_no_steps(self, model):
        assert expected_degree(model, 50, 50) == initial_degree(model, 50)

    @pytest.mark.parametrize(
        "model,i,t",
        [(GrowthModel.constant(2), 3, 80), (GrowthModel.power(1, 0.3), 10, 70), (GrowthModel.logarithmic(2), 21, 90)],
    )
    def test_matches_chain_mean(self, model, i, t):
        v = evolve_node(model, i, t)
        mean = float(np.dot(v.degrees, v.values))
        assert expected_degree(model, i, t) == pytest.approx(mean, rel=1e-12)

    def test_scalar_recursion(self):
        model = GrowthModel.logarithmic(1)
        e = float(initial_degree(model, 30))
        for s in range(30, 500):
            e *= 1 + math.log(s) / (2 * s * (math.log(s) - 1))
        assert expected_degree(model, 30, 500) == pytest.approx(e, rel=1e-12)

    def test_continuum_limit(self):
        assert expected_degree(BA1, 100, 10**6) == pytest.approx(100.0, rel=0.01)
