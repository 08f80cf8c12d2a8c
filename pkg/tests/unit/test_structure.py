"""Tests for girth, colouring, connectivity and classification."""

from itertools import combinations

import networkx as nx
import pytest

from snarkbound.fixtures import load_fixture
from snarkbound.graphs import Graph, MultiGraph
from snarkbound.models import INFINITE, NotCubicError, SnarkClassification
from snarkbound.structure import (
    _flow_network,
    _seed_cut,
    classify,
    cyclic_edge_connectivity,
    girth,
    is_k_edge_connected,
    is_proper_coloring,
    is_three_edge_colorable,
    minimum_cyclic_cut,
    three_edge_coloring,
)


def brute_force_cyclic_cut(g: Graph) -> int | str:
    """Smallest edge cut with a cycle on both sides, over every vertex bipartition."""
    ng = g.to_networkx()
    best: int | None = None
    others = list(range(1, g.n))
    for size in range(0, g.n - 1):
        for rest in combinations(others, size):
            side = {0, *rest}
            other = set(range(g.n)) - side
            if nx.is_forest(ng.subgraph(side)) or nx.is_forest(ng.subgraph(other)):
                continue
            value = sum(1 for u, v in ng.edges if (u in side) != (v in side))
            best = value if best is None else min(best, value)
    return INFINITE if best is None else best


def bridged_petersens() -> Graph:
    """Two Petersen graphs with one subdivided edge each, joined by a bridge."""
    base = [e for e in nx.petersen_graph().edges if e != (0, 1)]
    edges = []
    for shift in (0, 11):
        edges += [(u + shift, v + shift) for u, v in base]
        edges += [(0 + shift, 10 + shift), (10 + shift, 1 + shift)]
    edges.append((10, 21))
    return Graph.from_edges(22, edges)


class TestGirth:
    @pytest.mark.parametrize(
        ("name", "expected"),
        [("k4", 3), ("k33", 4), ("prism", 3), ("mobius8", 4), ("petersen", 5)],
    )
    def test_named_graphs(self, name, expected):
        assert girth(load_fixture(name)) == expected

    def test_forest_is_infinite(self):
        assert girth(Graph.from_edges(4, [(0, 1), (1, 2), (1, 3)])) == INFINITE

    def test_matches_networkx(self, small_graph):
        assert girth(small_graph) == nx.girth(small_graph.to_networkx())


class TestColoring:
    def test_colorable_graphs(self, k4, k33, prism, mobius8):
        for g in (k4, k33, prism, mobius8):
            coloring = three_edge_coloring(g)
            assert coloring is not None
            assert is_proper_coloring(g, coloring)

    def test_petersen_uncolorable(self, petersen):
        assert three_edge_coloring(petersen) is None
        assert not is_three_edge_colorable(petersen)

    def test_k33_colorable(self, k33):
        assert is_three_edge_colorable(k33)

    def test_flower_snark_uncolorable(self, j5):
        assert three_edge_coloring(j5) is None

    def test_requires_cubic(self):
        with pytest.raises(NotCubicError):
            three_edge_coloring(Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)]))

    def test_improper_coloring_detected(self, k4):
        coloring = {e: 0 for e in k4.edges}
        assert not is_proper_coloring(k4, coloring)


class TestEdgeConnectivity:
    def test_frames(self, f2, k5):
        assert is_k_edge_connected(f2, 4)
        assert not is_k_edge_connected(f2, 5)
        assert is_k_edge_connected(k5, 4)

    def test_two_parallel_pairs(self):
        """A 4-cycle of double edges is 4-regular but only 4-edge-connected, not 5."""
        mg = MultiGraph.from_edges(4, [(i, (i + 1) % 4) for i in range(4) for _ in range(2)])
        assert is_k_edge_connected(mg, 4)
        assert not is_k_edge_connected(mg, 5)


class TestCyclicConnectivity:
    """Test the seeded max-flow method against brute force."""

    @pytest.mark.parametrize(
        ("name", "expected"),
        [("k4", INFINITE), ("k33", INFINITE), ("prism", 3), ("mobius8", 4), ("petersen", 5)],
    )
    def test_named_graphs(self, name, expected):
        assert cyclic_edge_connectivity(load_fixture(name)) == expected

    def test_matches_brute_force(self, small_graph):
        assert cyclic_edge_connectivity(small_graph) == brute_force_cyclic_cut(small_graph)

    def test_prism_witness_is_the_spokes(self, prism):
        value, cut = minimum_cyclic_cut(prism)

        assert value == 3
        assert cut == ((0, 3), (1, 4), (2, 5))

    def test_bridge(self):
        assert cyclic_edge_connectivity(bridged_petersens()) == 1

    def test_seed_cut_between_petersen_pentagons(self, petersen):
        """Outer and inner 5-cycles of networkx's Petersen are joined by five spokes."""
        network = _flow_network(petersen)

        value, side = _seed_cut(network, range(5), range(5, 10), 5)

        assert value == 5
        assert side == {0, 1, 2, 3, 4}
        assert sorted(network.nodes) == list(range(10))

    def test_seed_cut_stops_above_limit(self, petersen):
        value, _ = _seed_cut(_flow_network(petersen), range(5), range(5, 10), 3)
        assert value == 4


class TestClassify:
    def test_petersen_is_snark(self, petersen):
        result = classify(petersen)

        assert result.classification == SnarkClassification.SNARK
        assert result.girth == 5
        assert result.cyclic_edge_connectivity == 5
        assert result.to_dict()["three_edge_colorable"] is False

    def test_k4_is_colorable(self, k4):
        result = classify(k4)

        assert result.classification == SnarkClassification.THREE_EDGE_COLORABLE
        assert "coloring" in result.to_dict()

    def test_flower_snark(self, j5):
        assert classify(j5).classification == SnarkClassification.SNARK

    def test_bridged_graph_is_uncolorable(self):
        result = classify(bridged_petersens())

        assert result.classification == SnarkClassification.UNCOLORABLE
        assert result.cyclic_edge_connectivity == 1

    def test_weak_snark(self):
        result = classify(load_fixture("weak22"))

        assert result.classification == SnarkClassification.WEAK_SNARK
        assert result.girth == 4
        assert result.cyclic_edge_connectivity == 4
        assert result.coloring is None
