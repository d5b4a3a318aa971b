from fractions import Fraction

import numpy as np
import pytest

from hdgraphon.errors import DisconnectedSkeletonError
from hdgraphon.limitprob import (
    LimitKind,
    LimitReason,
    LimitVerdict,
    OmegaRegion,
    classify_limit,
    limit_gaussian,
    omega_region,
    omega_region_probability,
    sample_omega,
)
from hdgraphon.model import StepGraphon, concentration_vector, graphon_from_support, skeleton_graph
from hdgraphon.polytope import edge_polytope

from oracles import orthant_probability

W2_REF, W3_REF = 0.16699, 0.04446


def region_and_gaussian(w):
    x = concentration_vector(w)
    return limit_gaussian(x), omega_region(edge_polytope(skeleton_graph(w)), x)


class TestGaussian:
    def test_two_blocks(self):
        g = limit_gaussian([Fraction(1, 2)] * 2)
        assert np.allclose(g.covariance, [[0.25, -0.25], [-0.25, 0.25]], atol=1e-15)

    def test_null_vector_and_factor(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            g = limit_gaussian(rng.dirichlet(np.ones(rng.integers(2, 8))))
            assert np.max(np.abs(g.covariance @ np.ones(g.q))) < 1e-15
            assert np.max(np.abs(g.factor @ g.factor.T - g.covariance)) <= 1e-12
            assert np.max(np.abs(np.ones(g.q) @ g.factor)) <= 1e-12

    def test_thirds(self):
        g = limit_gaussian([Fraction(1, 3)] * 3)
        assert np.max(np.abs(g.factor @ g.factor.T - g.covariance)) <= 1e-12

    def test_zero_noise_gives_mean(self):
        g = limit_gaussian([Fraction(1, 4), Fraction(3, 4)])
        assert np.array_equal(g.mean + g.factor @ np.zeros(2), g.mean)

    def test_rejects_zero_entry(self):
        with pytest.raises(ValueError):
            limit_gaussian([0, 1])

    def test_moments(self, w2):
        g = limit_gaussian(concentration_vector(w2))
        w = sample_omega(g, 3, 10**6)
        bound = 4 * np.sqrt(np.trace(g.covariance) / 10**6)
        assert np.max(np.abs(w.mean(axis=0) - g.mean)) < bound
        assert np.max(np.abs(np.cov(w.T) - g.covariance)) < 0.01
        assert np.max(np.abs(w.sum(axis=1) - 1)) < 1e-10

    def test_single_draw_shape(self, w1):
        assert sample_omega(limit_gaussian(concentration_vector(w1)), 0).shape == (3,)


class TestRegionProbability:
    def test_w1_singleton_exact(self, w1):
        g, r = region_and_gaussian(w1)
        assert r.size == 1
        assert omega_region_probability(g, r) == (0.5, 0.0)

    def test_singleton_matches_sampling(self, w1):
        g, r = region_and_gaussian(w1)
        p, _ = omega_region_probability(g, r, 10**6, seed=2, exact_singleton=False)
        assert abs(p - 0.5) < 0.005

    @pytest.mark.parametrize("fixture, ref, active", [("w2", W2_REF, 2), ("w3", W3_REF, 3)])
    def test_reference_values(self, request, fixture, ref, active):
        g, r = region_and_gaussian(request.getfixturevalue(fixture))
        assert r.size == active
        p, se = omega_region_probability(g, r, 200_000, seed=0)
        assert abs(p - ref) <= 3 * se
        closed = orthant_probability(r.active_normals, g.covariance)
        assert abs(p - closed) <= 4 * se

    def test_w2_closed_form_is_one_sixth(self, w2):
        g, r = region_and_gaussian(w2)
        assert abs(orthant_probability(r.active_normals, g.covariance) - 1 / 6) < 1e-12

    def test_thread_count_does_not_matter(self, w3):
        g, r = region_and_gaussian(w3)
        one = omega_region_probability(g, r, 100_000, seed=9, threads=1)
        four = omega_region_probability(g, r, 100_000, seed=9, threads=4)
        assert one == four
        assert one != omega_region_probability(g, r, 100_000, seed=10)

    def test_empty_region(self, w1):
        g = limit_gaussian(concentration_vector(w1))
        with pytest.raises(ValueError):
            omega_region_probability(g, OmegaRegion(np.zeros((0, 3))))

    def test_sample_count(self, w2):
        g, r = region_and_gaussian(w2)
        with pytest.raises(ValueError):
            omega_region_probability(g, r, 0)


class TestClassifyLimit:
    def test_fig2_triple(self, fig2):
        got = [classify_limit(w, 20_000) for w in fig2]
        assert [v.kind for v in got] == [LimitKind.ONE, LimitKind.RESIDUAL, LimitKind.ZERO]
        assert got[1].probability == 0.5 and got[1].active_count == 1
        assert got[0].reason is LimitReason.INTERIOR
        assert got[2].reason is LimitReason.OUTSIDE_POLYTOPE

    def test_even_cycle(self):
        sigma = tuple(Fraction(k, 4) for k in range(5))
        w = graphon_from_support(sigma, [(0, 1), (1, 2), (2, 3), (0, 3)], Fraction(1, 2))
        v = classify_limit(w)
        assert v.kind is LimitKind.ZERO and v.reason is LimitReason.NO_ODD_CYCLE

    def test_disconnected(self):
        w = graphon_from_support((0, Fraction(1, 2), 1), [(0, 0), (1, 1)])
        with pytest.raises(DisconnectedSkeletonError):
            classify_limit(w)

    def test_single_looped_block(self):
        v = classify_limit(StepGraphon((0, 1), ((Fraction(1, 2),),)))
        assert v.kind is LimitKind.ONE

    def test_w2_residual(self, w2):
        v = classify_limit(w2, 200_000)
        assert v.kind is LimitKind.RESIDUAL and v.reason is LimitReason.BOUNDARY
        assert abs(v.probability - W2_REF) <= 3 * v.stderr
        assert v.active_count == 2

    def test_scaling_keeps_verdict(self, w1):
        assert classify_limit(w1.scaled(Fraction(1, 5))).probability == 0.5

    def test_dict_roundtrip(self, w3):
        v = classify_limit(w3, 10_000)
        assert LimitVerdict.from_dict(v.to_dict()) == v
