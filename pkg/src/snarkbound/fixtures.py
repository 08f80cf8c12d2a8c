"""
Bundled graph corpus.

Small named cubic graphs, flower snarks, the frames used for substitution
and snarks built as dot products of smaller snarks. Any place that accepts
a graph file also accepts ``fixture:NAME`` (or a group name such as
``fixture:snarks``).
"""

import hashlib
import json
import logging
from collections.abc import Callable, Iterator
from dataclasses import dataclass
from functools import cache
from itertools import combinations
from pathlib import Path
from typing import Any

import networkx as nx

from .formats import encode, file_sha256, read_records, write_records
from .graphs import Graph, MultiGraph, normalize_edge, require_cubic
from .models import InputDigest, InvalidGraphError, SnarkboundError

logger = logging.getLogger(__name__)

FIXTURE_PREFIX = "fixture:"

Subject = Graph | MultiGraph


def flower_snark(k: int) -> Graph:
    """
    The flower snark ``J_k`` on ``4k`` vertices, ``k`` odd.

    Vertex ``4i`` is the centre of star ``i`` with leaves ``4i+1`` (on the
    inner ``k``-cycle) and ``4i+2``, ``4i+3`` (on the outer ``2k``-cycle).
    """
    if k < 3 or k % 2 == 0:
        raise InvalidGraphError(f"flower snarks need odd k >= 3, got {k}")
    edges = []
    for i in range(k):
        a, b, c, d = 4 * i, 4 * i + 1, 4 * i + 2, 4 * i + 3
        nb, nc, nd = 4 * ((i + 1) % k) + 1, 4 * ((i + 1) % k) + 2, 4 * ((i + 1) % k) + 3
        edges += [(a, b), (a, c), (a, d), (b, nb)]
        if i < k - 1:
            edges += [(c, nc), (d, nd)]
        else:
            # the outer cycle closes with a twist
            edges += [(c, nd), (d, nc)]
    return Graph.from_edges(4 * k, edges)


def dot_product(
    g1: Graph,
    e1: tuple[int, int],
    e2: tuple[int, int],
    g2: Graph,
    x: int,
    y: int,
    square: bool = False,
) -> Graph:
    """
    Join ``g1`` minus independent edges ``e1``, ``e2`` to ``g2`` minus adjacent ``x``, ``y``.

    The ends of ``e1`` go to the other neighbours of ``x`` and the ends of
    ``e2`` to those of ``y``, in the order given. Vertices of ``g1`` keep
    their ids; the rest of ``g2`` follows in ascending order.

    With ``square`` the two joins made for ``e2`` are subdivided twice each
    and the four new vertices (the last ids) closed into a 4-cycle. The
    joins made for ``e1`` already rule out a 3-edge-colouring, so the
    result of two snarks stays uncolourable, and it has girth 4.
    """
    require_cubic(g1, "left factor")
    require_cubic(g2, "right factor")
    (a, b), (c, d) = e1, e2
    if len({a, b, c, d}) < 4 or not (g1.has_edge(a, b) and g1.has_edge(c, d)):
        raise InvalidGraphError("dot product needs two independent edges of the left factor")
    if not g2.has_edge(x, y):
        raise InvalidGraphError("dot product needs two adjacent vertices of the right factor")
    x1, x2 = (w for w in g2.neighbors(x) if w != y)
    y1, y2 = (w for w in g2.neighbors(y) if w != x)

    rest = [v for v in range(g2.n) if v not in (x, y)]
    index = {v: g1.n + i for i, v in enumerate(rest)}
    removed = {normalize_edge(a, b), normalize_edge(c, d)}
    edges = [e for e in g1.edges if e not in removed]
    edges += [(index[u], index[v]) for u, v in g2.edges if u in index and v in index]
    edges += [(a, index[x1]), (b, index[x2])]
    n = g1.n + g2.n - 2
    if not square:
        edges += [(c, index[y1]), (d, index[y2])]
        return Graph.from_edges(n, edges)
    s0, s1, s2, s3 = range(n, n + 4)
    edges += [(c, s0), (s0, s1), (s1, index[y1]), (d, s3), (s3, s2), (s2, index[y2])]
    edges += [(s0, s3), (s1, s2)]
    return Graph.from_edges(n + 4, edges)


def distinct_dot_products(g1: Graph, g2: Graph, limit: int | None = None) -> list[Graph]:
    """
    Pairwise non-isomorphic dot products of ``g1`` and ``g2``.

    The adjacent pair of ``g2`` is its first edge; every ordered choice of
    two independent edges of ``g1`` is tried in edge order.
    """
    x, y = g2.edges[0]
    found: list[Graph] = []
    seen: dict[str, list[nx.Graph]] = {}
    for e1, e2 in combinations(g1.edges, 2):
        if set(e1) & set(e2):
            continue
        for flipped in (e2, e2[::-1]):
            g = dot_product(g1, e1, flipped, g2, x, y)
            ng = g.to_networkx()
            key = nx.weisfeiler_lehman_graph_hash(ng)
            bucket = seen.setdefault(key, [])
            if any(nx.is_isomorphic(ng, other) for other in bucket):
                continue
            bucket.append(ng)
            found.append(g)
            if limit is not None and len(found) >= limit:
                return found
    logger.debug(f"{len(found)} distinct dot product(s) on {g1.n + g2.n - 2} vertices")
    return found


# =============================================================================
# Registry
# =============================================================================


@dataclass(frozen=True)
class Fixture:
    name: str
    description: str
    build: Callable[[], Subject]
    tags: tuple[str, ...] = ()


def _petersen() -> Graph:
    return Graph.from_networkx(nx.petersen_graph())


@cache
def _blanusa() -> tuple[Graph, ...]:
    return tuple(distinct_dot_products(_petersen(), _petersen()))


def _blanusa_nth(i: int) -> Callable[[], Graph]:
    return lambda: _blanusa()[i]


@cache
def _dot28() -> tuple[Graph, ...]:
    p, j5 = _petersen(), flower_snark(5)
    kept: list[Graph] = []
    for g in distinct_dot_products(p, j5, limit=2) + distinct_dot_products(j5, p, limit=3):
        ng = g.to_networkx()
        if not any(nx.is_isomorphic(ng, k.to_networkx()) for k in kept):
            kept.append(g)
    return tuple(kept[:4])


def _dot28_nth(i: int) -> Callable[[], Graph]:
    return lambda: _dot28()[i]


@cache
def _dot26() -> tuple[Graph, ...]:
    return tuple(distinct_dot_products(_petersen(), _blanusa()[0], limit=2))


FIXTURES: dict[str, Fixture] = {
    f.name: f
    for f in [
        Fixture("k4", "complete graph on 4 vertices",
                lambda: Graph.from_networkx(nx.complete_graph(4)), ("small",)),
        Fixture("k33", "complete bipartite graph K_{3,3}",
                lambda: Graph.from_networkx(nx.complete_bipartite_graph(3, 3)), ("small",)),
        Fixture("petersen", "Petersen graph", _petersen, ("small", "snarks")),
        Fixture("prism", "triangular prism",
                lambda: Graph.from_networkx(nx.circular_ladder_graph(3)), ("small",)),
        Fixture("mobius8", "Moebius ladder on 8 vertices",
                lambda: Graph.from_networkx(nx.circulant_graph(8, [1, 4])), ("small",)),
        Fixture("blanusa1", "18-vertex snark, Petersen dot Petersen", _blanusa_nth(0),
                ("snarks", "snarks18")),
        Fixture("blanusa2", "18-vertex snark, Petersen dot Petersen", _blanusa_nth(1),
                ("snarks", "snarks18")),
        Fixture("weak22", "22-vertex weak snark of girth 4, squared Petersen dot Petersen",
                lambda: dot_product(_petersen(), (0, 1), (2, 3), _petersen(), 0, 1, square=True),
                ("weak",)),
        Fixture("j5", "flower snark J5", lambda: flower_snark(5), ("snarks", "snarks20")),
        Fixture("dot26a", "26-vertex snark, Petersen dot Blanusa", lambda: _dot26()[0],
                ("snarks", "snarks26")),
        Fixture("dot26b", "26-vertex snark, Petersen dot Blanusa", lambda: _dot26()[1],
                ("snarks", "snarks26")),
        Fixture("j7", "flower snark J7", lambda: flower_snark(7), ("snarks", "snarks28")),
        Fixture("dot28a", "28-vertex dot product of Petersen and J5", _dot28_nth(0),
                ("snarks", "snarks28")),
        Fixture("dot28b", "28-vertex dot product of Petersen and J5", _dot28_nth(1),
                ("snarks", "snarks28")),
        Fixture("dot28c", "28-vertex dot product of Petersen and J5", _dot28_nth(2),
                ("snarks", "snarks28")),
        Fixture("dot28d", "28-vertex dot product of Petersen and J5", _dot28_nth(3),
                ("snarks", "snarks28")),
        Fixture("f2", "frame: two vertices joined by four parallel edges",
                lambda: MultiGraph.from_edges(2, [(0, 1)] * 4), ("frames",)),
        Fixture("k5", "frame: complete graph on 5 vertices",
                lambda: MultiGraph.from_edges(5, combinations(range(5), 2)), ("frames",)),
    ]
}


def fixture_names(group: str) -> list[str]:
    """Names of a single fixture or of every fixture tagged ``group``."""
    if group in FIXTURES:
        return [group]
    names = [f.name for f in FIXTURES.values() if group in f.tags]
    if not names:
        raise SnarkboundError(f"unknown fixture {group!r}")
    return names


def load_fixture(name: str) -> Subject:
    try:
        return FIXTURES[name].build()
    except KeyError:
        raise SnarkboundError(f"unknown fixture {name!r}") from None


@dataclass
class Source:
    """Graphs read from one command-line argument."""

    graphs: list[tuple[str, Subject]]
    digest: InputDigest

    def single(self) -> tuple[str, Subject]:
        if len(self.graphs) != 1:
            raise SnarkboundError(
                f"{self.digest.path} holds {len(self.graphs)} graphs, expected exactly one"
            )
        return self.graphs[0]


def load_source(ref: str) -> Source:
    """
    Read ``fixture:NAME`` or a graph6/sparse6 file.

    File graphs are named ``<file name>#<record index>``. The digest of a
    fixture is taken over its serialized records.
    """
    if ref.startswith(FIXTURE_PREFIX):
        names = fixture_names(ref.removeprefix(FIXTURE_PREFIX))
        graphs = [(name, load_fixture(name)) for name in names]
        text = "".join(next(iter(encode(g).values())) + "\n" for _, g in graphs)
        digest = InputDigest(ref, hashlib.sha256(text.encode("ascii")).hexdigest())
        return Source(graphs, digest)

    path = Path(ref)
    if not path.exists():
        raise SnarkboundError(f"no such graph file: {path}")
    records = read_records(path)
    graphs = [(f"{path.name}#{r.index}", r.graph) for r in records]
    return Source(graphs, InputDigest(str(path), file_sha256(path)))


def iter_fixtures(group: str | None = None) -> Iterator[tuple[str, Subject]]:
    names = list(FIXTURES) if group is None else fixture_names(group)
    for name in names:
        yield name, load_fixture(name)


def write_corpus(dest: Path, group: str | None = None) -> list[dict[str, Any]]:
    """Write each fixture to its own record file plus an ``index.json``."""
    dest.mkdir(parents=True, exist_ok=True)
    index = []
    for name, g in iter_fixtures(group):
        suffix = ".s6" if isinstance(g, MultiGraph) else ".g6"
        path = dest / f"{name}{suffix}"
        write_records(path, [g])
        index.append(
            {
                "name": name,
                "file": path.name,
                "n": g.n,
                "description": FIXTURES[name].description,
                "tags": list(FIXTURES[name].tags),
                "sha256": file_sha256(path),
                **encode(g),
            }
        )
    (dest / "index.json").write_text(json.dumps(index, indent=2, sort_keys=True) + "\n")
    logger.info(f"Wrote {len(index)} fixture(s) to {dest}")
    return index
