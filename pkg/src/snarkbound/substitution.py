"""
Substitution of a cubic graph H into a 4-regular multigraph F.

Every vertex of F becomes a block, a copy of H minus the two ends of the
substitution edge e = xy. The four block vertices that lost a neighbour
(the attachment vertices) carry the edges of F between blocks.
"""

import json
import logging
import random
from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import networkx as nx

from .graphs import Edge, Graph, MultiGraph, is_cubic, normalize_edge, require_cubic
from .models import (
    InvalidGraphError,
    LinkingPolicy,
    SubstitutionError,
    ValidationFailure,
)
from .structure import cyclic_edge_connectivity, girth

logger = logging.getLogger(__name__)

SIDECAR_SUFFIX = ".blockmap.json"


def attachment_profile(h: Graph, e: Sequence[int]) -> list[int]:
    """
    The H-neighbours of ``x`` other than ``y``, then those of ``y`` other
    than ``x``, each pair ascending.

    Raises:
        SubstitutionError: when the four vertices are not distinct.
    """
    require_cubic(h, "host")
    x, y = h.require_edge(e)
    profile = [v for v in h.adjacency[x] if v != y] + [v for v in h.adjacency[y] if v != x]
    if len(set(profile)) != 4:
        raise SubstitutionError("attachment vertices not distinct")
    return profile


@dataclass
class BlockMap:
    """
    Block structure of a substitution.

    ``attachments[i][p]`` is ``(vertex of G, id of the F-edge it carries)`` for
    profile position ``p`` of block ``i``. Block ids are the vertex ids of F.
    """

    block_of: list[int]
    attachments: list[list[tuple[int, int]]]
    h_vertex_of: list[int]
    substitution_edge: Edge
    block_size: int = 0
    blocks: list[list[int]] = field(default_factory=list, repr=False)

    def __post_init__(self) -> None:
        if not self.block_size and self.block_of:
            self.block_size = len(self.block_of) // max(1, len(self.attachments))
        if not self.blocks:
            self.blocks = [[] for _ in self.attachments]
            for v, i in enumerate(self.block_of):
                self.blocks[i].append(v)

    @property
    def block_count(self) -> int:
        return len(self.attachments)

    def attachment_of_edge(self, block: int, f_edge: int) -> int:
        """The vertex of ``block`` carrying F-edge ``f_edge``."""
        for v, fid in self.attachments[block]:
            if fid == f_edge:
                return v
        raise SubstitutionError(f"F-edge {f_edge} does not leave block {block}")

    def to_dict(self) -> dict[str, Any]:
        return {
            "block_of": self.block_of,
            "attachments": [[[v, fid] for v, fid in a] for a in self.attachments],
            "h_vertex_of": self.h_vertex_of,
            "substitution_edge": list(self.substitution_edge),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "BlockMap":
        try:
            return cls(
                block_of=list(data["block_of"]),
                attachments=[[(v, fid) for v, fid in a] for a in data["attachments"]],
                h_vertex_of=list(data["h_vertex_of"]),
                substitution_edge=normalize_edge(*data["substitution_edge"]),
            )
        except (KeyError, IndexError, TypeError, ValueError) as e:
            raise SubstitutionError(f"malformed block map: {e}") from e

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def save(self, path: Path) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_json() + "\n")

    @classmethod
    def load(cls, path: Path) -> "BlockMap":
        if not path.exists():
            raise SubstitutionError(f"block map not found: {path}")
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError as e:
            raise SubstitutionError(f"block map {path} is not JSON: {e}") from e
        return cls.from_dict(data)


def sidecar_path(graph_path: Path) -> Path:
    return graph_path.with_name(graph_path.name + SIDECAR_SUFFIX)


def _slot_orders(blocks: int, policy: LinkingPolicy, seed: int) -> list[list[int]]:
    if policy == LinkingPolicy.CANONICAL:
        return [[0, 1, 2, 3] for _ in range(blocks)]
    rng = random.Random(seed)
    orders = []
    for _ in range(blocks):
        order = [0, 1, 2, 3]
        rng.shuffle(order)
        orders.append(order)
    return orders


def substitute(
    h: Graph,
    e: Sequence[int],
    f: MultiGraph,
    policy: LinkingPolicy = LinkingPolicy.CANONICAL,
    seed: int = 0,
) -> tuple[Graph, BlockMap]:
    """
    Build ``G = S(H, F, e)``.

    F-edges are linked in ascending id order; each takes the next free
    attachment slot of both of its blocks. Slots are used in profile order
    (canonical) or in a per-block permutation drawn from ``seed``.

    Raises:
        NotCubicError: if ``h`` is not cubic.
        EdgeNotFoundError: if ``e`` is not an edge of ``h``.
        SubstitutionError: if ``f`` is not 4-regular and connected, or the
            attachment vertices of ``e`` coincide.
    """
    require_cubic(h, "host")
    x, y = h.require_edge(e)
    if f.n == 0 or not f.is_regular(4):
        raise SubstitutionError("frame must be 4-regular")
    if not f.is_connected():
        raise SubstitutionError("frame must be connected")
    profile = attachment_profile(h, (x, y))

    block, keep = h.without_vertices((x, y))
    local = {v: i for i, v in enumerate(keep)}
    b = block.n

    block_of = [i for i in range(f.n) for _ in range(b)]
    h_vertex_of = [keep[j] for _ in range(f.n) for j in range(b)]
    edges: list[Edge] = [(i * b + u, i * b + v) for i in range(f.n) for u, v in block.edges]

    orders = _slot_orders(f.n, policy, seed)
    used = [0] * f.n
    slot_edge: list[list[int | None]] = [[None] * 4 for _ in range(f.n)]

    def take(i: int, fid: int) -> int:
        slot = orders[i][used[i]]
        used[i] += 1
        slot_edge[i][slot] = fid
        return i * b + local[profile[slot]]

    for fid, (u, v) in enumerate(f.edges):
        edges.append((take(u, fid), take(v, fid)))

    attachments = [
        [(i * b + local[profile[p]], fid) for p, fid in enumerate(slot_edge[i]) if fid is not None]
        for i in range(f.n)
    ]
    g = Graph.from_edges(b * f.n, edges)
    bm = BlockMap(block_of, attachments, h_vertex_of, (x, y), block_size=b)
    logger.info(
        f"Substituted {h.n}-vertex host along {x}-{y} into {f.n}-vertex frame: "
        f"{g.n} vertices ({policy.value} linking)"
    )
    return g, bm


def contract(g: Graph, bm: BlockMap) -> MultiGraph:
    """Contract every block to a vertex, keeping inter-block edges with multiplicity."""
    quotient = [
        (bm.block_of[u], bm.block_of[v])
        for u, v in g.edges
        if bm.block_of[u] != bm.block_of[v]
    ]
    return MultiGraph.from_edges(bm.block_count, quotient)


# =============================================================================
# Validation
# =============================================================================


@dataclass
class ClauseResult:
    name: str
    passed: bool
    detail: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {"clause": self.name, "passed": self.passed, "detail": self.detail}


@dataclass
class ValidationReport:
    """Outcome of every structural check on a substitution."""

    clauses: list[ClauseResult] = field(default_factory=list)
    girth: int | str | None = None
    cyclic_edge_connectivity: int | str | None = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.clauses)

    @property
    def failures(self) -> list[ClauseResult]:
        return [c for c in self.clauses if not c.passed]

    def clause(self, name: str) -> ClauseResult:
        for c in self.clauses:
            if c.name == name:
                return c
        raise KeyError(name)

    def raise_for_failure(self) -> None:
        if self.failures:
            first = self.failures[0]
            raise ValidationFailure(first.name, first.detail)

    def to_dict(self) -> dict[str, Any]:
        result: dict[str, Any] = {
            "passed": self.passed,
            "clauses": [c.to_dict() for c in self.clauses],
            "girth": self.girth,
        }
        if self.cyclic_edge_connectivity is not None:
            result["cyclic_edge_connectivity"] = self.cyclic_edge_connectivity
        return result


def _check_blocks(g: Graph, bm: BlockMap, block: Graph, keep: list[int]) -> ClauseResult:
    expected = {normalize_edge(keep[u], keep[v]) for u, v in block.edges}
    for i, members in enumerate(bm.blocks):
        originals = [bm.h_vertex_of[v] for v in members]
        if sorted(originals) != keep:
            return ClauseResult("block_isomorphism", False, f"block {i} does not copy H - {{x,y}}")
        inside = set(members)
        induced = {
            normalize_edge(bm.h_vertex_of[u], bm.h_vertex_of[w])
            for u in members
            for w in g.adjacency[u]
            if w in inside and u < w
        }
        if induced != expected:
            return ClauseResult(
                "block_isomorphism", False, f"block {i} is not isomorphic to H - {{x,y}}"
            )
    return ClauseResult("block_isomorphism", True)


def _check_external(g: Graph, bm: BlockMap, f: MultiGraph) -> ClauseResult:
    tag = {v: fid for a in bm.attachments for v, fid in a}
    per_block: Counter[int] = Counter()
    for u, v in g.edges:
        bu, bv = bm.block_of[u], bm.block_of[v]
        if bu == bv:
            continue
        per_block[bu] += 1
        per_block[bv] += 1
        if u not in tag or v not in tag:
            detail = f"({u}, {v}) leaves a non-attachment vertex"
            return ClauseResult("external_edges", False, detail)
        if tag[u] != tag[v]:
            return ClauseResult("external_edges", False, f"({u}, {v}) joins two different F-edges")
        if normalize_edge(bu, bv) != f.edges[tag[u]]:
            return ClauseResult(
                "external_edges", False, f"({u}, {v}) does not realise F-edge {tag[u]}"
            )
    bad = [i for i in range(bm.block_count) if per_block[i] != 4]
    if bad:
        detail = f"block {bad[0]} has {per_block[bad[0]]} external edges"
        return ClauseResult("external_edges", False, detail)
    return ClauseResult("external_edges", True)


def _check_contraction(g: Graph, bm: BlockMap, f: MultiGraph) -> ClauseResult:
    quotient = contract(g, bm)
    if Counter(quotient.edges) == Counter(f.edges):
        return ClauseResult("contraction", True)
    if nx.is_isomorphic(quotient.to_networkx(), f.to_networkx()):
        return ClauseResult("contraction", True, "isomorphic to F under relabelling")
    return ClauseResult("contraction", False, "contracted graph is not isomorphic to F")


def _check_attachments(bm: BlockMap, profile: list[int]) -> ClauseResult:
    for i, a in enumerate(bm.attachments):
        originals = sorted(bm.h_vertex_of[v] for v, _ in a)
        if len(a) != 4 or originals != sorted(profile):
            return ClauseResult(
                "attachments", False, f"block {i} attaches at {originals}, expected {profile}"
            )
    return ClauseResult("attachments", True)


def validate_substitution(
    g: Graph,
    bm: BlockMap,
    h: Graph,
    e: Sequence[int],
    f: MultiGraph,
    check_cyclic: bool = False,
) -> ValidationReport:
    """
    Check a substitution clause by clause.

    Clauses: ``cubic``, ``vertex_count``, ``block_isomorphism``,
    ``external_edges``, ``contraction``, ``attachments`` and, when
    ``check_cyclic`` is set, ``cyclic_4_edge_connected``. The girth of ``g``
    is always reported.
    """
    report = ValidationReport()
    x, y = h.require_edge(e)
    profile = attachment_profile(h, (x, y))
    block, keep = h.without_vertices((x, y))

    cubic = is_cubic(g)
    report.clauses.append(ClauseResult("cubic", cubic, "" if cubic else "G is not cubic"))
    expected_n = block.n * f.n
    count_ok = g.n == expected_n and len(bm.block_of) == g.n and bm.block_count == f.n
    detail = "" if count_ok else f"{g.n} vertices, expected {expected_n}"
    report.clauses.append(ClauseResult("vertex_count", count_ok, detail))
    if not count_ok:
        return report

    report.clauses.append(_check_blocks(g, bm, block, keep))
    report.clauses.append(_check_external(g, bm, f))
    report.clauses.append(_check_contraction(g, bm, f))
    report.clauses.append(_check_attachments(bm, profile))
    report.girth = girth(g)

    if check_cyclic:
        try:
            lam = cyclic_edge_connectivity(g)
        except InvalidGraphError as err:
            report.clauses.append(ClauseResult("cyclic_4_edge_connected", False, str(err)))
        else:
            report.cyclic_edge_connectivity = lam
            ok = lam == "infinite" or (isinstance(lam, int) and lam >= 4)
            detail = "" if ok else f"cyclic connectivity {lam}"
            report.clauses.append(ClauseResult("cyclic_4_edge_connected", ok, detail))

    for failure in report.failures:
        logger.warning(f"Substitution check {failure.name} failed: {failure.detail}")
    return report
