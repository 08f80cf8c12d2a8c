"""Tests for the bundled graph corpus."""

import hashlib
import json

import networkx as nx
import pytest

from snarkbound.fixtures import (
    FIXTURES,
    distinct_dot_products,
    dot_product,
    fixture_names,
    flower_snark,
    load_fixture,
    load_source,
    write_corpus,
)
from snarkbound.formats import write_records
from snarkbound.graphs import Graph, MultiGraph, is_cubic
from snarkbound.models import InvalidGraphError, SnarkboundError
from snarkbound.structure import girth, three_edge_coloring


class TestFlowerSnarks:
    @pytest.mark.parametrize("k", [3, 5, 7])
    def test_cubic_on_4k_vertices(self, k):
        g = flower_snark(k)

        assert g.n == 4 * k
        assert is_cubic(g)
        assert g.is_connected()

    def test_j5_girth(self, j5):
        assert girth(j5) == 5

    @pytest.mark.parametrize("k", [1, 4])
    def test_needs_odd_k(self, k):
        with pytest.raises(InvalidGraphError, match="odd"):
            flower_snark(k)


class TestDotProducts:
    def test_petersen_dot_petersen(self, petersen):
        g = dot_product(petersen, (0, 1), (2, 3), petersen, 0, 1)

        assert g.n == 18
        assert is_cubic(g)
        assert three_edge_coloring(g) is None

    def test_adjacent_edges_rejected(self, petersen):
        with pytest.raises(InvalidGraphError, match="independent"):
            dot_product(petersen, (0, 1), (1, 2), petersen, 0, 1)

    def test_non_adjacent_pair_rejected(self, petersen):
        with pytest.raises(InvalidGraphError, match="adjacent"):
            dot_product(petersen, (0, 1), (2, 3), petersen, 0, 2)

    def test_two_blanusa_snarks(self, petersen):
        """Petersen dot Petersen gives exactly the two Blanusa snarks."""
        found = distinct_dot_products(petersen, petersen)

        assert len(found) == 2
        assert not nx.is_isomorphic(found[0].to_networkx(), found[1].to_networkx())

    def test_limit(self, petersen):
        assert len(distinct_dot_products(petersen, petersen, limit=1)) == 1

    def test_squared_dot_product(self, petersen):
        g = dot_product(petersen, (0, 1), (2, 3), petersen, 0, 1, square=True)

        assert g.n == 22
        assert is_cubic(g)
        assert girth(g) == 4
        assert [g.has_edge(u, v) for u, v in [(18, 19), (19, 20), (20, 21), (21, 18)]] == [True] * 4


class TestRegistry:
    def test_every_fixture_builds(self):
        for name, fixture in FIXTURES.items():
            g = load_fixture(name)
            if "frames" in fixture.tags:
                assert isinstance(g, MultiGraph)
                assert g.is_regular(4)
            else:
                assert is_cubic(g), name

    def test_groups(self):
        assert fixture_names("snarks18") == ["blanusa1", "blanusa2"]
        assert fixture_names("frames") == ["f2", "k5"]
        assert fixture_names("weak") == ["weak22"]
        assert fixture_names("petersen") == ["petersen"]

    @pytest.mark.parametrize("group", ["snarks26", "snarks28"])
    def test_larger_snarks_distinct(self, group):
        graphs = [load_fixture(name).to_networkx() for name in fixture_names(group)]
        for i, a in enumerate(graphs):
            for b in graphs[i + 1 :]:
                assert not nx.is_isomorphic(a, b)

    def test_unknown(self):
        with pytest.raises(SnarkboundError, match="unknown fixture"):
            load_fixture("dodecahedron")
        with pytest.raises(SnarkboundError, match="unknown fixture"):
            fixture_names("nothing")


class TestSources:
    def test_fixture_source(self, petersen):
        source = load_source("fixture:petersen")

        assert source.single() == ("petersen", petersen)
        assert source.digest.sha256 == hashlib.sha256(b"IheA@GUAo\n").hexdigest()

    def test_group_source_needs_single(self):
        source = load_source("fixture:snarks18")

        assert len(source.graphs) == 2
        with pytest.raises(SnarkboundError, match="expected exactly one"):
            source.single()

    def test_file_source(self, tmp_path, k4, petersen):
        path = tmp_path / "two.g6"
        write_records(path, [k4, petersen])

        source = load_source(str(path))

        assert [name for name, _ in source.graphs] == ["two.g6#0", "two.g6#1"]
        assert source.digest.sha256 == hashlib.sha256(path.read_bytes()).hexdigest()

    def test_missing_file(self, tmp_path):
        with pytest.raises(SnarkboundError, match="no such graph file"):
            load_source(str(tmp_path / "absent.g6"))


class TestCorpus:
    def test_write_frames(self, tmp_path):
        index = write_corpus(tmp_path, "frames")

        assert [entry["file"] for entry in index] == ["f2.s6", "k5.s6"]
        assert (tmp_path / "f2.s6").exists()
        saved = json.loads((tmp_path / "index.json").read_text())
        assert saved == index

    def test_written_graphs_load_back(self, tmp_path, petersen):
        write_corpus(tmp_path, "small")
        name, g = load_source(str(tmp_path / "petersen.g6")).single()

        assert name == "petersen.g6#0"
        assert isinstance(g, Graph)
        assert g == petersen
