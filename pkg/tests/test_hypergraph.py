from fractions import Fraction
import math

import numpy as np
import pytest

from hommeas import f2la, hypergraph
from hommeas.hypergraph import Hypergraph


def cycle(n):
    return Hypergraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


SIX = Hypergraph.from_edges(6, [(0, 1), (1, 2), (3, 4), (4, 5)])
K4 = Hypergraph.from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3), (0, 2), (1, 3)])


class TestHypergraph:
    def test_from_edges(self):
        g = Hypergraph.from_edges(3, [(0, 1), (1, 2)])
        assert (g.n_vertices, g.n_edges) == (3, 2)
        np.testing.assert_array_equal(g.degrees(), [1, 2, 1])
        assert g.edges() == [(0, 1), (1, 2)]
        assert g.is_graph()

    def test_rejects_bad_vertex(self):
        with pytest.raises(ValueError):
            Hypergraph.from_edges(2, [(0, 2)])

    def test_rejects_empty_edge(self):
        with pytest.raises(ValueError):
            Hypergraph(np.array([[0, 0]], np.uint8))

    def test_with_edges_and_equality(self):
        g = cycle(4).with_edges([(0, 2)])
        assert g.n_edges == 5
        assert g == cycle(4).with_edges([(0, 2)])
        assert g != cycle(4)

    def test_boundary(self):
        # edges (1, 2) and (3, 0) leave the set
        np.testing.assert_array_equal(hypergraph.boundary(cycle(4), [0, 1]), [1, 3])


class TestCheeger:
    @pytest.mark.parametrize("g,h", [
        (cycle(8), Fraction(1, 2)),
        (cycle(4), Fraction(1)),
        (SIX, Fraction(0)),
        (K4, Fraction(2)),
    ])
    def test_oracle_values(self, g, h):
        assert hypergraph.cheeger(g) == h

    def test_sparsest_cut_is_lexicographic(self):
        assert hypergraph.sparsest_cut(cycle(8)) == (0, 1, 2, 3)

    def test_hyperedge_boundary_is_parity(self):
        g = Hypergraph.from_edges(4, [(0, 1, 2, 3)])
        assert hypergraph.boundary(g, [0, 1]).size == 0
        assert hypergraph.boundary(g, [0]).tolist() == [0]
        assert hypergraph.cheeger(g) == 0

    def test_single_vertex_is_infinite(self):
        assert hypergraph.cheeger(Hypergraph(np.zeros((0, 1), np.uint8), 1)) == math.inf

    def test_cap(self):
        with pytest.raises(hypergraph.CheegerCapExceeded):
            hypergraph.cheeger(cycle(10), cap=8)


class TestExpansion:
    def test_cycle_of_eight(self):
        g, added = hypergraph.expand_edges(cycle(8))
        assert added == [(0, 4), (2, 6)]
        assert hypergraph.cheeger(g) == 1

    def test_two_paths(self):
        trace = []
        g, added = hypergraph.expand_edges(SIX, trace=trace)
        assert added == [(0, 3), (2, 5), (0, 5)]
        assert trace[0] == 0 and trace[-1] == 1
        assert hypergraph.cheeger(g) == 1

    def test_already_expanding(self):
        g, added = hypergraph.expand_edges(K4)
        assert added == [] and g == K4

    def test_perfect_matchings(self):
        ms = list(hypergraph.perfect_matchings([0, 1, 2, 3]))
        assert ms == [[(0, 1), (2, 3)], [(0, 2), (1, 3)], [(0, 3), (1, 2)]]
        assert len(list(hypergraph.perfect_matchings(range(6)))) == 15

    def test_expand_hyperedges(self):
        g = Hypergraph.from_edges(4, [(0, 1, 2, 3), (0, 1)])
        out, origin = hypergraph.expand_hyperedges(g)
        assert out.is_graph()
        assert origin == [0, 0, 1]
        # the pair of edges replacing the hyperedge covers each vertex once
        np.testing.assert_array_equal(out.incidence[:2].sum(axis=0), [1, 1, 1, 1])

    def test_odd_hyperedge_rejected(self):
        with pytest.raises(ValueError, match="odd"):
            hypergraph.expand_hyperedges(Hypergraph.from_edges(3, [(0, 1, 2)]))


class TestCycles:
    def test_cycle_basis(self):
        g = cycle(8).with_edges([(0, 4), (2, 6)])
        basis = hypergraph.cycle_basis(g)
        assert basis.shape == (3, 10)
        assert not f2la.mat_mul(basis, g.incidence).any()

    def test_tree_has_no_cycles(self):
        tree = Hypergraph.from_edges(4, [(0, 1), (1, 2), (1, 3)])
        assert hypergraph.cycle_basis(tree).shape == (0, 3)

    def test_cellulate_expanded_octagon(self):
        g = cycle(8).with_edges([(0, 4), (2, 6)])
        # three pentagons sharing the two long chords
        pentagons = np.array([
            [1, 1, 1, 1, 0, 0, 0, 0, 1, 0],
            [0, 0, 0, 0, 1, 1, 1, 1, 1, 0],
            [0, 0, 1, 1, 1, 1, 0, 0, 0, 1],
        ], np.uint8)
        pentagons[2] = [0, 0, 1, 1, 1, 1, 0, 0, 0, 1]
        assert not f2la.mat_mul(pentagons, g.incidence).any()
        cell = hypergraph.cellulate(g, pentagons, max_cycle_weight=5, max_degree=3)
        assert cell.added == [(1, 3), (5, 7)]
        assert sorted(cell.cycles.sum(axis=1).tolist()) == [3, 3, 4, 4, 5]
        assert not cell.complete
        assert cell.graph.degrees().max() <= 3
        assert not f2la.mat_mul(cell.cycles, cell.graph.incidence).any()
        assert f2la.rank(cell.cycles) == cell.cycles.shape[0]

    def test_cellulate_light_cycles_untouched(self):
        g = cycle(4)
        cell = hypergraph.cellulate(g, hypergraph.cycle_basis(g), 5, 3)
        assert cell.added == [] and cell.complete
