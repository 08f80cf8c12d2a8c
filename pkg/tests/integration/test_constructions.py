"""Full-size substitutions of the flower snark J5."""

import pytest

from snarkbound.bounds import family_oddness_bound, shortness_report
from snarkbound.cycles import circumference
from snarkbound.factors import oddness
from snarkbound.fixtures import load_fixture
from snarkbound.graphs import is_cubic
from snarkbound.longcycle import construct_long_cycle
from snarkbound.models import SubgraphMode
from snarkbound.structure import cyclic_edge_connectivity
from snarkbound.substitution import substitute, validate_substitution

pytestmark = pytest.mark.slow

EDGE = (0, 1)


@pytest.fixture(scope="module")
def j5_bounds():
    return shortness_report(load_fixture("j5"), EDGE, "j5")


@pytest.fixture(scope="module")
def j5_f2():
    h, f = load_fixture("j5"), load_fixture("f2")
    g, bm = substitute(h, EDGE, f)
    return h, f, g, bm


@pytest.fixture(scope="module")
def j5_k5():
    h, f = load_fixture("j5"), load_fixture("k5")
    g, bm = substitute(h, EDGE, f)
    return h, f, g, bm


class TestThirtySixVertices:
    """J5 substituted into the two-vertex frame."""

    def test_structure(self, j5_f2):
        h, f, g, bm = j5_f2
        report = validate_substitution(g, bm, h, EDGE, f, check_cyclic=True)

        assert g.n == 36
        assert report.passed, report.to_dict()
        assert cyclic_edge_connectivity(g) == 4

    def test_long_cycle_within_circumference(self, j5_f2):
        _, f, g, bm = j5_f2

        built = construct_long_cycle(g, bm, f)
        exact, witness = circumference(g)

        built.cycle.validate(g)
        witness.validate(g)
        assert {bm.block_of[v] for v in built.cycle} == {0, 1}
        assert built.length <= exact

    def test_circumference_within_family_bound(self, j5_f2, j5_bounds):
        _, f, g, _ = j5_f2

        exact, _ = circumference(g)

        assert j5_bounds.per_block == 18
        assert exact <= j5_bounds.per_block * f.n

    def test_oddness_within_family_bound(self, j5_f2, j5_bounds):
        _, f, g, _ = j5_f2

        report = oddness(g)

        assert j5_bounds.q is not None
        assert report.oddness >= family_oddness_bound(j5_bounds.q, f.n)


class TestNinetyVertices:
    """J5 substituted into K5."""

    def test_structure(self, j5_k5):
        h, f, g, bm = j5_k5
        report = validate_substitution(g, bm, h, EDGE, f)

        assert g.n == 90
        assert is_cubic(g)
        assert report.passed, report.to_dict()

    @pytest.mark.parametrize("mode", [SubgraphMode.FULL, SubgraphMode.CYCLE])
    def test_long_cycle_visits_every_block(self, j5_k5, j5_bounds, mode):
        _, f, g, bm = j5_k5

        built = construct_long_cycle(g, bm, f, mode=mode)

        built.cycle.validate(g)
        assert {bm.block_of[v] for v in built.cycle} == set(range(5))
        expected_edges = 10 if mode == SubgraphMode.FULL else 5
        assert len(built.trail_labels) == expected_edges
        assert built.length <= j5_bounds.per_block * f.n
