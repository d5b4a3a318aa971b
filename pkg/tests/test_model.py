import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hdgraphon.errors import (
    AsymmetricValuesError,
    BreakpointOrderError,
    MalformedGraphonError,
    ValueRangeError,
)
from hdgraphon.model import (
    SkeletonGraph,
    StepGraphon,
    concentration_vector,
    has_odd_cycle,
    is_connected,
    parse_step_graphon,
    skeleton_graph,
)


def doc(sigma, values, **extra):
    return json.dumps({"sigma": sigma, "values": values, **extra})


class TestParse:
    def test_w1_document(self, w1):
        assert w1.q == 3
        assert w1.sigma == (0, Fraction(1, 3), Fraction(2, 3), 1)
        assert w1.values[0][2] == Fraction(9, 10)

    def test_single_block(self):
        g = parse_step_graphon(doc(["0", "1"], [["1/2"]]))
        assert g.q == 1 and g.values == ((Fraction(1, 2),),)

    def test_asymmetric(self):
        with pytest.raises(AsymmetricValuesError):
            parse_step_graphon(doc(["0", "1/2", "1"], [["0", "1"], ["1/2", "0"]]))

    def test_decimals_are_exact(self):
        g = parse_step_graphon(doc(["0", "0.25", "0.5", "0.75", "1"], [["0.1"] * 4] * 4))
        assert g.sigma[1] == Fraction(1, 4)
        assert g.values[0][0] == Fraction(1, 10)

    def test_json_numbers_read_from_literal(self):
        g = parse_step_graphon('{"sigma": [0, 0.1, 1], "values": [[0.3, 1], [1, 0]]}')
        assert g.sigma[1] == Fraction(1, 10)
        assert g.values[0][0] == Fraction(3, 10)

    def test_scale(self):
        g = parse_step_graphon(doc(["0", "1"], [["1"]], scale="0.7"))
        assert g.values[0][0] == Fraction(7, 10)

    @pytest.mark.parametrize(
        "text, exc",
        [
            ("not json", MalformedGraphonError),
            ("[1, 2]", MalformedGraphonError),
            (doc(["0", "1"], [["x"]]), MalformedGraphonError),
            (doc(["0", "1"], [["1", "0"]]), MalformedGraphonError),
            ('{"sigma": ["0", "1"]}', MalformedGraphonError),
            (doc(["0", "1"], [["1"]], extra=1), MalformedGraphonError),
            (doc(["0", "2/3", "1/3", "1"], [["0"] * 3] * 3), BreakpointOrderError),
            (doc(["0", "1/2", "1/2", "1"], [["0"] * 3] * 3), BreakpointOrderError),
            (doc(["0.1", "1"], [["0"]]), BreakpointOrderError),
            (doc(["0", "1"], [["3/2"]]), ValueRangeError),
            (doc(["0", "1"], [["-1/2"]]), ValueRangeError),
            (doc(["0", "1"], [["1"]], scale="2"), ValueRangeError),
        ],
    )
    def test_errors(self, text, exc):
        with pytest.raises(exc):
            parse_step_graphon(text)

    def test_roundtrip(self, w2):
        assert parse_step_graphon(json.dumps(w2.to_document())) == w2


class TestConcentration:
    def test_w1(self, w1):
        assert concentration_vector(w1) == (Fraction(1, 3),) * 3

    def test_quarters(self):
        g = parse_step_graphon(doc(["0", "0.25", "0.5", "0.75", "1"], [["0"] * 4] * 4))
        assert concentration_vector(g) == (Fraction(1, 4),) * 4

    def test_single(self):
        assert concentration_vector(StepGraphon((0, 1), ((0,),))) == (1,)

    @given(st.lists(st.fractions(min_value=0, max_value=1, max_denominator=1000), min_size=0, max_size=8, unique=True))
    def test_exact_simplex(self, inner):
        inner = sorted(x for x in inner if 0 < x < 1)
        sigma = (0, *inner, 1)
        q = len(sigma) - 1
        x = concentration_vector(StepGraphon(sigma, ((0,) * q,) * q))
        assert sum(x) == 1
        assert all(v > 0 for v in x)


class TestSkeleton:
    def test_w2(self, w2):
        s = skeleton_graph(w2)
        assert s.loops == frozenset()
        assert s.edges == {(0, 1), (0, 2), (0, 3), (1, 2), (1, 4), (2, 5)}

    def test_single_loop(self):
        s = skeleton_graph(StepGraphon((0, 1), ((Fraction(1, 2),),)))
        assert s.loops == {0} and not s.edges

    def test_w1(self, w1):
        s = skeleton_graph(w1)
        assert s.edges == {(0, 2), (1, 2)}
        assert s.loops == {1, 2}
        assert s.edge_order == ((0, 2), (1, 1), (1, 2), (2, 2))

    @given(st.fractions(min_value=0, max_value=1, max_denominator=97).filter(lambda c: c > 0))
    def test_scaling_invariant(self, c):
        from hdgraphon.experiment import bundled_graphon

        for name in ("w1", "w2", "fig1"):
            w = bundled_graphon(name)
            assert skeleton_graph(w.scaled(c)) == skeleton_graph(w)


class TestOddCycle:
    def test_loops(self, w1):
        assert has_odd_cycle(skeleton_graph(w1))

    def test_even_cycle(self):
        assert not has_odd_cycle(SkeletonGraph.from_pairs(4, [(0, 1), (1, 2), (2, 3), (3, 0)]))

    def test_triangle(self):
        assert has_odd_cycle(SkeletonGraph.from_pairs(3, [(0, 1), (1, 2), (0, 2)]))

    def test_w2_triangle(self, w2):
        assert has_odd_cycle(skeleton_graph(w2))

    def test_tree(self):
        assert not has_odd_cycle(SkeletonGraph.from_pairs(4, [(0, 1), (0, 2), (0, 3)]))


class TestConnected:
    def test_w2(self, w2):
        assert is_connected(skeleton_graph(w2))

    def test_two_loops(self):
        assert not is_connected(SkeletonGraph.from_pairs(2, [(0, 0), (1, 1)]))

    def test_single(self):
        assert is_connected(SkeletonGraph(1, frozenset(), frozenset()))

    def test_bad_edge(self):
        with pytest.raises(ValueError):
            SkeletonGraph(2, frozenset(), frozenset({(1, 0)}))
