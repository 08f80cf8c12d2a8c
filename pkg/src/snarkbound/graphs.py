"""
Graph data model: simple graphs, loop-free multigraphs, edges and cycles.

Vertex ids are dense 0-based integers. Both graph types are immutable once
built, so they can be shared between worker processes.
"""

from collections import deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any

import networkx as nx

from .models import EdgeNotFoundError, InvalidGraphError, NotCubicError

Edge = tuple[int, int]
Path = tuple[int, ...]


def normalize_edge(u: int, v: int) -> Edge:
    """Return the edge with its smaller endpoint first."""
    if u == v:
        raise InvalidGraphError(f"loop at vertex {u}")
    return (u, v) if u < v else (v, u)


def parse_edge(text: str) -> Edge:
    """Parse ``"u,v"`` (as given on the command line) into an edge."""
    parts = text.replace(" ", "").split(",")
    if len(parts) != 2:
        raise InvalidGraphError(f"edge must be written u,v: {text!r}")
    try:
        return normalize_edge(int(parts[0]), int(parts[1]))
    except ValueError as e:
        raise InvalidGraphError(f"edge must be written u,v: {text!r}") from e


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph stored as sorted adjacency lists."""

    n: int
    adjacency: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.adjacency) != self.n:
            raise InvalidGraphError(
                f"adjacency has {len(self.adjacency)} rows for {self.n} vertices"
            )
        for v, row in enumerate(self.adjacency):
            if list(row) != sorted(set(row)):
                raise InvalidGraphError(f"adjacency of {v} is unsorted or has parallel edges")
            for u in row:
                if u == v:
                    raise InvalidGraphError(f"loop at vertex {v}")
                if not 0 <= u < self.n:
                    raise InvalidGraphError(f"vertex {v} has out-of-range neighbour {u}")
                if v not in self.adjacency[u]:
                    raise InvalidGraphError(f"asymmetric adjacency between {v} and {u}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        rows: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise InvalidGraphError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidGraphError(f"edge ({u}, {v}) out of range for {n} vertices")
            if v in rows[u]:
                raise InvalidGraphError(f"parallel edge ({u}, {v})")
            rows[u].add(v)
            rows[v].add(u)
        return cls(n, tuple(tuple(sorted(r)) for r in rows))

    @classmethod
    def from_networkx(cls, g: nx.Graph) -> "Graph":
        """Convert a networkx graph, relabelling nodes in sorted order."""
        nodes = sorted(g.nodes())
        index = {v: i for i, v in enumerate(nodes)}
        return cls.from_edges(len(nodes), ((index[u], index[v]) for u, v in g.edges()))

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges)
        return g

    @cached_property
    def edges(self) -> tuple[Edge, ...]:
        """All edges ``(u, v)`` with ``u < v`` in lexicographic order."""
        return tuple((u, v) for u in range(self.n) for v in self.adjacency[u] if u < v)

    @cached_property
    def masks(self) -> tuple[int, ...]:
        """Neighbourhood bit rows, bit ``u`` of ``masks[v]`` set iff ``uv`` is an edge."""
        return tuple(sum(1 << u for u in row) for row in self.adjacency)

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        return 0 <= u < self.n and v in self.adjacency[u]

    def require_edge(self, e: Sequence[int]) -> Edge:
        """Normalize ``e`` and check it is an edge, raising ``EdgeNotFoundError``."""
        u, v = e
        if u == v or not self.has_edge(u, v):
            raise EdgeNotFoundError(f"({u}, {v}) is not an edge of the graph")
        return normalize_edge(u, v)

    def induced(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        """
        Induced subgraph on ``vertices``.

        Returns the subgraph (relabelled 0..k-1 in ascending order of the
        original ids) and the list mapping new ids back to original ids.
        """
        keep = sorted(set(vertices))
        index = {v: i for i, v in enumerate(keep)}
        edges = [
            (index[u], index[v]) for u in keep for v in self.adjacency[u] if v in index and u < v
        ]
        return Graph.from_edges(len(keep), edges), keep

    def without_vertices(self, removed: Iterable[int]) -> tuple["Graph", list[int]]:
        gone = set(removed)
        return self.induced(v for v in range(self.n) if v not in gone)

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Rename vertex ``v`` to ``perm[v]``."""
        if sorted(perm) != list(range(self.n)):
            raise InvalidGraphError("relabelling is not a permutation")
        return Graph.from_edges(self.n, ((perm[u], perm[v]) for u, v in self.edges))

    def is_connected(self) -> bool:
        return self.n == 0 or len(self.component_of(0)) == self.n

    def component_of(self, v: int) -> set[int]:
        seen = {v}
        queue = deque([v])
        while queue:
            u = queue.popleft()
            for w in self.adjacency[u]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return seen

    def to_dict(self) -> dict[str, Any]:
        return {"n": self.n, "edges": [list(e) for e in self.edges]}


def is_cubic(g: Graph) -> bool:
    """True iff every vertex has degree exactly 3."""
    return g.n > 0 and all(len(row) == 3 for row in g.adjacency)


def require_cubic(g: Graph, what: str = "graph") -> None:
    if not is_cubic(g):
        bad = next((v for v in range(g.n) if g.degree(v) != 3), None)
        detail = f"vertex {bad} has degree {g.degree(bad)}" if bad is not None else "empty graph"
        raise NotCubicError(f"{what} is not cubic: {detail}")


@dataclass(frozen=True)
class MultiGraph:
    """
    Loop-free undirected multigraph.

    Edge ids are positions in ``edges``, so parallel edges stay
    distinguishable. ``labels`` carries, for each edge, the id of the edge it
    was taken from when this multigraph is a subgraph of another one; for a
    freshly built multigraph the labels are the ids themselves.
    """

    n: int
    edges: tuple[Edge, ...]
    labels: tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        for i, (u, v) in enumerate(self.edges):
            if u == v:
                raise InvalidGraphError(f"loops unsupported (edge {i} at vertex {u})")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InvalidGraphError(f"edge {i} ({u}, {v}) out of range for {self.n} vertices")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(range(len(self.edges))))
        elif len(self.labels) != len(self.edges):
            raise InvalidGraphError("one label per edge required")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "MultiGraph":
        return cls(n, tuple(normalize_edge(u, v) for u, v in edges))

    @classmethod
    def from_graph(cls, g: Graph) -> "MultiGraph":
        return cls(g.n, g.edges)

    @cached_property
    def incidence(self) -> tuple[tuple[int, ...], ...]:
        """Incident edge ids per vertex, ascending."""
        rows: list[list[int]] = [[] for _ in range(self.n)]
        for i, (u, v) in enumerate(self.edges):
            rows[u].append(i)
            rows[v].append(i)
        return tuple(tuple(r) for r in rows)

    def degree(self, v: int) -> int:
        return len(self.incidence[v])

    def other_end(self, edge_id: int, v: int) -> int:
        u, w = self.edges[edge_id]
        if v == u:
            return w
        if v == w:
            return u
        raise InvalidGraphError(f"vertex {v} is not an end of edge {edge_id}")

    def is_regular(self, k: int) -> bool:
        return all(self.degree(v) == k for v in range(self.n))

    def is_connected(self) -> bool:
        return nx.is_connected(self.to_networkx()) if self.n else True

    def multiplicity(self, u: int, v: int) -> int:
        edge = normalize_edge(u, v)
        return sum(1 for e in self.edges if e == edge)

    def edge_subgraph(self, edge_ids: Iterable[int]) -> "MultiGraph":
        """Spanning subgraph on the given edges; labels point back into this graph."""
        ids = sorted(set(edge_ids))
        return MultiGraph(
            self.n, tuple(self.edges[i] for i in ids), tuple(self.labels[i] for i in ids)
        )

    def to_networkx(self) -> nx.MultiGraph:
        mg = nx.MultiGraph()
        mg.add_nodes_from(range(self.n))
        for i, (u, v) in enumerate(self.edges):
            mg.add_edge(u, v, key=i)
        return mg

    def to_dict(self) -> dict[str, Any]:
        return {"n": self.n, "edges": [list(e) for e in self.edges]}


@dataclass(frozen=True)
class Cycle:
    """A cycle given by its cyclic vertex sequence."""

    vertices: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    @property
    def edges(self) -> list[Edge]:
        vs = self.vertices
        return [normalize_edge(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]

    def vertex_set(self) -> frozenset[int]:
        return frozenset(self.vertices)

    def canonical(self) -> "Cycle":
        return Cycle(canonical_cycle(self.vertices))

    def validate(self, g: Graph) -> None:
        """Raise ``InvalidGraphError`` unless this is a cycle of ``g``."""
        vs = self.vertices
        if len(vs) < 3:
            raise InvalidGraphError(f"cycle of length {len(vs)} is too short")
        if len(set(vs)) != len(vs):
            raise InvalidGraphError("cycle repeats a vertex")
        for u, v in self.edges:
            if not g.has_edge(u, v):
                raise InvalidGraphError(f"cycle uses non-edge ({u}, {v})")

    def to_list(self) -> list[int]:
        return list(self.vertices)


def canonical_cycle(vertices: Sequence[int]) -> tuple[int, ...]:
    """Minimal rotation of the lexicographically smaller orientation."""
    vs = tuple(vertices)
    start = vs.index(min(vs))
    forward = vs[start:] + vs[:start]
    backward = (forward[0],) + tuple(reversed(forward[1:]))
    return min(forward, backward)


def validate_matching(g: Graph, matching: Iterable[Sequence[int]]) -> tuple[Edge, ...]:
    """Normalize a matching, checking edges exist and are pairwise disjoint."""
    edges = tuple(sorted(g.require_edge(e) for e in matching))
    covered: set[int] = set()
    for u, v in edges:
        if u in covered or v in covered:
            raise InvalidGraphError(f"not a matching: vertex of ({u}, {v}) already covered")
        covered.update((u, v))
    return edges


def validate_path(g: Graph, path: Sequence[int]) -> None:
    if len(set(path)) != len(path):
        raise InvalidGraphError("path repeats a vertex")
    for a, b in zip(path, path[1:], strict=False):
        if not g.has_edge(a, b):
            raise InvalidGraphError(f"path uses non-edge ({a}, {b})")


def popcount(x: int) -> int:
    return x.bit_count()

