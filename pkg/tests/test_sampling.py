from fractions import Fraction
from itertools import product
from math import factorial, sqrt

import numpy as np
import pytest
from scipy import stats

from hdgraphon.errors import EdgeListError
from hdgraphon.model import StepGraphon, concentration_vector
from hdgraphon.sampling import (
    GraphSampler,
    SampledGraph,
    block_counts,
    directed_arc_exists,
    empirical_concentration,
    format_edgelist,
    parse_edgelist,
    sample_blocks,
    sample_graph,
    substream,
)

FIG1_EDGES = [(0, 1), (1, 3), (0, 2), (2, 3), (4, 5)]


def const(v):
    return StepGraphon((0, 1), ((Fraction(v),),))


def test_full_graphon_gives_complete_graph():
    g = sample_graph(const(1), 5, 0)
    assert g.n_edges == 10
    assert all(g.has_edge(i, j) for i in range(5) for j in range(5) if i != j)


def test_zero_graphon_gives_empty_graph():
    assert sample_graph(const(0), 5, 0).n_edges == 0


def test_no_self_loops_and_symmetric(w1):
    g = sample_graph(w1, 40, 3)
    assert not any(g.has_edge(i, i) for i in range(40))
    indptr, indices = g.csr
    dense = np.zeros((40, 40), bool)
    for i in range(40):
        dense[i, indices[indptr[i]:indptr[i + 1]]] = True
    assert (dense == dense.T).all() and not dense.diagonal().any()


def test_same_seed_same_graph(w2):
    a = sample_graph(w2, 300, substream(9, 4))
    b = sample_graph(w2, 300, substream(9, 4))
    c = sample_graph(w2, 300, substream(9, 5))
    assert a.bits.tobytes() == b.bits.tobytes()
    assert np.array_equal(a.block_of, b.block_of)
    assert a.bits.tobytes() != c.bits.tobytes()


def test_coordinates_match_blocks(w2):
    g = sample_graph(w2, 500, 1, coordinates=True)
    sigma = [float(s) for s in w2.sigma]
    for y, b in zip(g.coordinates, g.block_of):
        assert sigma[b] <= y < sigma[b + 1]
    h = sample_graph(w2, 500, 1)
    assert h.coordinates is None and h.bits.tobytes() == g.bits.tobytes()


def test_breakpoint_belongs_to_right_block(w1):
    s = GraphSampler(w1)
    assert s.blocks(np.array([0.0, 1 / 3, 2 / 3, 0.9999, 1.0])).tolist() == [0, 1, 2, 2, 2]


def test_block_counts_concentrate(w1):
    n = 10_000
    sd = sqrt((1 / 3) * (2 / 3) / n)
    ok = 0
    for seed in range(100):
        x = np.bincount(sample_blocks(w1, n, seed), minlength=3) / n
        ok += bool(np.all(np.abs(x - 1 / 3) <= 3 * sd))
    assert ok >= 99


def test_edge_density_per_block_pair(w1):
    s = GraphSampler(w1)
    q, n, trials = 3, 2000, 50
    pairs = np.zeros((q, q))
    hits = np.zeros((q, q))
    for t in range(trials):
        g = s.sample(n, substream(21, t))
        c = block_counts(g)
        pairs += np.triu(np.outer(c, c), 1) + np.diag(c * (c - 1) / 2)
        e = g.edge_array
        a, b = np.sort(g.block_of[e], axis=1).T
        np.add.at(hits, (a, b), 1)
    vals = s.values
    for a in range(q):
        for b in range(a, q):
            w, m = vals[a, b], pairs[a, b]
            dens = hits[a, b] / m
            if w in (0.0, 1.0):
                assert dens == w
            else:
                assert abs(dens - w) <= 3 * sqrt(w * (1 - w) / m), (a, b)


def test_block_vector_is_multinomial(w1):
    n, draws = 4, 10_000
    x = [float(v) for v in concentration_vector(w1)]
    cells = [c for c in product(range(n + 1), repeat=3) if sum(c) == n]
    index = {c: k for k, c in enumerate(cells)}
    observed = np.zeros(len(cells))
    s = GraphSampler(w1)
    for t in range(draws):
        observed[index[tuple(block_counts(s.sample(n, substream(5, t))))]] += 1
    expected = np.array(
        [factorial(n) / np.prod([factorial(k) for k in c]) * np.prod([p**k for p, k in zip(x, c)]) for c in cells]
    )
    assert abs(expected.sum() - 1) < 1e-12
    assert stats.chisquare(observed, expected * draws).pvalue > 1e-3


class TestEmpiricalConcentration:
    def test_direct_count(self):
        g = SampledGraph.from_edges(6, [], [0, 0, 1, 1, 2, 2], q=3)
        assert empirical_concentration(g) == (Fraction(1, 3),) * 3

    def test_w2_vector(self, w2):
        g = SampledGraph.from_edges(8, [], [1, 1, 0, 0, 2, 3, 4, 5], q=6)
        assert empirical_concentration(g) == concentration_vector(w2)

    def test_single_node(self):
        g = SampledGraph.from_edges(1, [], [0], q=2)
        assert empirical_concentration(g) == (1, 0)


class TestDirectedArcs:
    def test_fig1_both_orientations(self):
        g = SampledGraph.from_edges(6, FIG1_EDGES)
        assert directed_arc_exists(g, 0, 1) and directed_arc_exists(g, 1, 0)
        assert not directed_arc_exists(g, 0, 3)

    def test_empty(self):
        g = SampledGraph.from_edges(4, [])
        assert not any(directed_arc_exists(g, i, j) for i in range(4) for j in range(4) if i != j)

    def test_k2(self):
        g = SampledGraph.from_edges(2, [(0, 1)])
        assert directed_arc_exists(g, 0, 1) and directed_arc_exists(g, 1, 0)

    def test_self_pair(self):
        with pytest.raises(ValueError):
            directed_arc_exists(SampledGraph.from_edges(2, [(0, 1)]), 1, 1)


class TestEdgeList:
    def test_roundtrip(self, w1):
        g = sample_graph(w1, 30, 2)
        text = format_edgelist(g)
        assert text.splitlines()[0] == "30 3"
        assert text.splitlines()[-1].startswith("blocks ")
        h = parse_edgelist(text)
        assert h.bits.tobytes() == g.bits.tobytes()
        assert np.array_equal(h.block_of, g.block_of)

    def test_without_blocks(self):
        g = parse_edgelist("3 1\n0 1\n1 2\n")
        assert g.edges() == [(0, 1), (1, 2)]

    @pytest.mark.parametrize(
        "text",
        ["", "x y\n", "3 1\n0 0\n", "3 1\n0 5\n", "3 1\n0\n", "2 2\nblocks 1 3\n", "2 1\nblocks 1\n"],
    )
    def test_bad(self, text):
        with pytest.raises(EdgeListError):
            parse_edgelist(text)
