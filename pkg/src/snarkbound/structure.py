"""
Structural invariants of cubic graphs: girth, edge and cyclic edge
connectivity, 3-edge-colourability and snark classification.
"""

import logging
from collections import deque
from collections.abc import Iterable
from dataclasses import dataclass
from typing import Any

import networkx as nx
from networkx.algorithms.flow import edmonds_karp

from .graphs import Edge, Graph, MultiGraph, normalize_edge, require_cubic
from .models import INFINITE, Infinite, InvalidGraphError, SnarkClassification

logger = logging.getLogger(__name__)


def girth(g: Graph) -> int | Infinite:
    """Length of a shortest cycle, or ``"infinite"`` for a forest."""
    best: int | None = None
    for root in range(g.n):
        dist = {root: 0}
        parent = {root: -1}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            if best is not None and 2 * dist[u] + 1 >= best:
                break
            for w in g.adjacency[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif parent[u] != w:
                    length = dist[u] + dist[w] + 1
                    if best is None or length < best:
                        best = length
    return INFINITE if best is None else best


# =============================================================================
# 3-edge-colouring
# =============================================================================


def three_edge_coloring(g: Graph) -> dict[Edge, int] | None:
    """
    A proper 3-edge-colouring of the cubic graph ``g``, or ``None``.

    Backtracks over edges, always branching on the uncoloured edge with the
    fewest colours still available. The three edges at vertex 0 are fixed
    to colours 0, 1, 2.
    """
    require_cubic(g)
    edges = list(g.edges)
    index = {e: i for i, e in enumerate(edges)}
    colors = [-1] * len(edges)
    used = [0] * g.n

    def assign(i: int, c: int) -> None:
        u, v = edges[i]
        colors[i] = c
        used[u] |= 1 << c
        used[v] |= 1 << c

    def clear(i: int) -> None:
        u, v = edges[i]
        c = colors[i]
        colors[i] = -1
        used[u] &= ~(1 << c)
        used[v] &= ~(1 << c)

    for c, w in enumerate(g.adjacency[0]):
        assign(index[normalize_edge(0, w)], c)

    def search() -> bool:
        pick = -1
        pick_free = 0
        pick_count = 4
        for i, c in enumerate(colors):
            if c != -1:
                continue
            u, v = edges[i]
            free = ~(used[u] | used[v]) & 7
            count = free.bit_count()
            if count < pick_count:
                pick, pick_free, pick_count = i, free, count
                if count == 0:
                    return False
        if pick == -1:
            return True
        for c in range(3):
            if pick_free & (1 << c):
                assign(pick, c)
                if search():
                    return True
                clear(pick)
        return False

    if not search():
        return None
    return {e: colors[i] for i, e in enumerate(edges)}


def is_proper_coloring(g: Graph, coloring: dict[Edge, int]) -> bool:
    """Every edge coloured from {0,1,2} and no two edges at a vertex share a colour."""
    if set(coloring) != set(g.edges):
        return False
    for v in range(g.n):
        seen = [coloring[normalize_edge(v, w)] for w in g.adjacency[v]]
        if len(set(seen)) != len(seen) or any(c not in (0, 1, 2) for c in seen):
            return False
    return True


def is_three_edge_colorable(g: Graph) -> bool:
    return three_edge_coloring(g) is not None


# =============================================================================
# Edge connectivity
# =============================================================================


def is_k_edge_connected(mg: MultiGraph, k: int) -> bool:
    """True iff every edge cut of ``mg`` has at least ``k`` edges."""
    if mg.n <= 1:
        return True
    flow_graph = nx.Graph()
    flow_graph.add_nodes_from(range(mg.n))
    for u, v in mg.edges:
        if flow_graph.has_edge(u, v):
            flow_graph[u][v]["capacity"] += 1
        else:
            flow_graph.add_edge(u, v, capacity=1)
    for v in range(1, mg.n):
        if nx.minimum_cut_value(flow_graph, 0, v) < k:
            return False
    return True


def _connected_sets(g: Graph, size: int) -> list[tuple[int, ...]]:
    """All connected vertex sets of the given size, sorted."""
    level: set[frozenset[int]] = {frozenset([v]) for v in range(g.n)}
    for _ in range(size - 1):
        grown: set[frozenset[int]] = set()
        for s in level:
            for v in s:
                for w in g.adjacency[v]:
                    if w not in s:
                        grown.add(s | {w})
        level = grown
    return sorted(tuple(sorted(s)) for s in level)


_SOURCE = "source"
_SINK = "sink"


def _flow_network(g: Graph) -> nx.Graph:
    network = g.to_networkx()
    nx.set_edge_attributes(network, 1, "capacity")
    return network


def _seed_cut(
    network: nx.Graph, sources: Iterable[int], sinks: Iterable[int], limit: int
) -> tuple[int, set[int]]:
    """
    Minimum edge cut between two vertex sets, each contracted to one terminal.

    The flow stops once it exceeds ``limit``. When it stays within ``limit``
    the returned set is the source side of a minimum cut.
    """
    network.add_edges_from((_SOURCE, v) for v in sources)
    network.add_edges_from((v, _SINK) for v in sinks)
    try:
        value, (side, _) = nx.minimum_cut(
            network, _SOURCE, _SINK, flow_func=edmonds_karp, cutoff=limit + 1
        )
    finally:
        network.remove_nodes_from((_SOURCE, _SINK))
    return value, {v for v in side if v != _SOURCE}


def minimum_cyclic_cut(g: Graph) -> tuple[int | Infinite, tuple[Edge, ...]]:
    """
    Cyclic edge connectivity of a connected cubic graph with a witness cut.

    For growing ``k`` every pair of disjoint connected seed sets of ``k - 1``
    vertices (the first containing vertex 0) is separated by a max-flow
    capped at ``k``. In a cubic graph an acyclic side of a ``k``-edge cut has
    exactly ``k - 2`` vertices, so a seed that large forces a cycle on each
    side and the first ``k`` with a small enough flow is the answer.
    """
    require_cubic(g)
    if not g.is_connected():
        raise InvalidGraphError("cyclic edge connectivity needs a connected graph")

    network = _flow_network(g)
    for k in range(1, g.n // 2 + 1):
        size = max(1, k - 1)
        seeds = _connected_sets(g, size)
        logger.debug(f"Cyclic cut search k={k}: {len(seeds)} seed sets of size {size}")
        for x in seeds:
            if 0 not in x:
                continue
            x_set = set(x)
            for y in seeds:
                if x_set.intersection(y):
                    continue
                value, side = _seed_cut(network, x, y, k)
                if value <= k:
                    cut = tuple(
                        sorted(normalize_edge(u, w) for u in side for w in g.adjacency[u]
                               if w not in side)
                    )
                    return len(cut), cut
    return INFINITE, ()


def cyclic_edge_connectivity(g: Graph) -> int | Infinite:
    """Minimum size of an edge cut leaving two components that both contain a cycle."""
    return minimum_cyclic_cut(g)[0]


# =============================================================================
# Classification
# =============================================================================


@dataclass
class SnarkClass:
    """Colourability class together with the invariants it was derived from."""

    classification: SnarkClassification
    girth: int | Infinite
    cyclic_edge_connectivity: int | Infinite
    coloring: dict[Edge, int] | None = None

    def to_dict(self) -> dict[str, Any]:
        result: dict[str, Any] = {
            "classification": self.classification.value,
            "girth": self.girth,
            "cyclic_edge_connectivity": self.cyclic_edge_connectivity,
            "three_edge_colorable": self.coloring is not None,
        }
        if self.coloring is not None:
            result["coloring"] = [[u, v, c] for (u, v), c in sorted(self.coloring.items())]
        return result


def at_least(value: int | Infinite, k: int) -> bool:
    """Compare a value that may be ``"infinite"`` against ``k``."""
    return value == INFINITE or (isinstance(value, int) and value >= k)


def classify(g: Graph) -> SnarkClass:
    """Classify a connected cubic graph."""
    require_cubic(g)
    if not g.is_connected():
        raise InvalidGraphError("classification needs a connected graph")

    coloring = three_edge_coloring(g)
    gir = girth(g)
    lam = cyclic_edge_connectivity(g)

    if coloring is not None:
        kind = SnarkClassification.THREE_EDGE_COLORABLE
    elif at_least(lam, 4):
        kind = SnarkClassification.SNARK if at_least(gir, 5) else SnarkClassification.WEAK_SNARK
    else:
        kind = SnarkClassification.UNCOLORABLE

    logger.debug(f"Classified {g.n}-vertex graph as {kind.value} (girth {gir}, cyclic {lam})")
    return SnarkClass(kind, gir, lam, coloring)
