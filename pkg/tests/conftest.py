"""Shared pytest fixtures for snarkbound tests."""

import pytest

from snarkbound.fixtures import load_fixture
from snarkbound.graphs import Graph, MultiGraph

SMALL_FIXTURES = ["k4", "k33", "prism", "mobius8", "petersen"]


@pytest.fixture
def k4() -> Graph:
    return load_fixture("k4")


@pytest.fixture
def k33() -> Graph:
    return load_fixture("k33")


@pytest.fixture
def prism() -> Graph:
    return load_fixture("prism")


@pytest.fixture
def mobius8() -> Graph:
    return load_fixture("mobius8")


@pytest.fixture
def petersen() -> Graph:
    return load_fixture("petersen")


@pytest.fixture
def j5() -> Graph:
    return load_fixture("j5")


@pytest.fixture
def f2() -> MultiGraph:
    """Two vertices joined by four parallel edges."""
    return load_fixture("f2")


@pytest.fixture
def k5() -> MultiGraph:
    return load_fixture("k5")


@pytest.fixture(params=SMALL_FIXTURES)
def small_graph(request) -> Graph:
    """Every bundled graph small enough for brute-force oracles."""
    return load_fixture(request.param)
