"""
Long cycles in substitutions.

A closed eulerian trail of a spanning eulerian subgraph T of the frame is
lifted to a cycle of G: each pass of the trail through a block is realised
by a path inside the block between the two attachment vertices of the
trail edges used. A degree-4 vertex of T is passed twice, so its block must
hold two disjoint paths, and the trail must pair the four edges the same
way those paths do.
"""

import logging
from collections import deque
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any

from .cycles import LongestPathSearch, full_mask
from .graphs import Cycle, Graph, MultiGraph, Path, validate_path
from .models import (
    InvalidGraphError,
    NoCompatibleTrailError,
    SubgraphMode,
    SubstitutionError,
    ValidationFailure,
)
from .substitution import BlockMap

logger = logging.getLogger(__name__)

DEFAULT_BLOCK_CUTOFF = 26

Pair = tuple[int, int]
Pairing = tuple[Pair, ...]


# =============================================================================
# Spanning eulerian subgraphs
# =============================================================================


def _hamiltonian_edges(f: MultiGraph) -> list[int] | None:
    """Edge ids of a hamiltonian cycle of ``f`` (two parallel edges when ``n == 2``)."""
    n = f.n
    path = [0]
    used: list[int] = []
    on_path = {0}

    def extend() -> bool:
        cur = path[-1]
        for eid in f.incidence[cur]:
            if eid in used:
                continue
            w = f.other_end(eid, cur)
            if w == 0 and len(path) == n and (n > 2 or used):
                used.append(eid)
                return True
            if w in on_path:
                continue
            path.append(w)
            on_path.add(w)
            used.append(eid)
            if extend():
                return True
            used.pop()
            on_path.discard(w)
            path.pop()
        return False

    return used if n >= 2 and extend() else None


def spanning_eulerian_subgraph(
    f: MultiGraph, mode: SubgraphMode = SubgraphMode.FULL
) -> MultiGraph:
    """
    A connected spanning subgraph of ``f`` with all degrees even.

    ``FULL`` returns ``f`` itself, ``CYCLE`` a hamiltonian cycle of ``f``.
    Edge labels of the result are edge ids of ``f``.
    """
    if not f.is_regular(4) or not f.is_connected():
        raise SubstitutionError("frame must be 4-regular and connected")
    if mode == SubgraphMode.FULL:
        return f.edge_subgraph(range(len(f.edges)))
    cycle = _hamiltonian_edges(f)
    if cycle is None:
        raise InvalidGraphError("frame has no hamiltonian cycle")
    return f.edge_subgraph(cycle)


# =============================================================================
# Paths inside a block
# =============================================================================


def _lengthen(block: Graph, paths: list[list[int]]) -> list[list[int]]:
    """Greedily splice one- and two-vertex detours into the paths."""
    used = {v for p in paths for v in p}
    improved = True
    while improved:
        improved = False
        for p in paths:
            for i in range(len(p) - 1):
                a, b = p[i], p[i + 1]
                single = [c for c in block.adjacency[a] if c not in used and block.has_edge(c, b)]
                if single:
                    p.insert(i + 1, single[0])
                    used.add(single[0])
                    improved = True
                    break
                double = [
                    (c, d)
                    for c in block.adjacency[a]
                    if c not in used
                    for d in block.adjacency[c]
                    if d not in used and d != c and block.has_edge(d, b)
                ]
                if double:
                    c, d = double[0]
                    p[i + 1 : i + 1] = [c, d]
                    used.update((c, d))
                    improved = True
                    break
            if improved:
                break
    return paths


def two_disjoint_paths(
    block: Graph,
    s1: int,
    t1: int,
    s2: int,
    t2: int,
    cutoff: int = DEFAULT_BLOCK_CUTOFF,
) -> tuple[Path, Path] | None:
    """
    Vertex-disjoint paths ``s1 -> t1`` and ``s2 -> t2`` with the most vertices.

    Both paths are found as one path ``s1 .. t1 s2 .. t2`` in an auxiliary
    digraph where ``s2`` can only be entered from ``t1``. Blocks up to
    ``cutoff`` vertices are searched exhaustively; larger ones take the
    first pair found and lengthen it greedily.
    """
    if len({s1, t1, s2, t2}) != 4:
        raise InvalidGraphError("two disjoint paths need four distinct end vertices")
    nbr = [m & ~(1 << s2) for m in block.masks]
    nbr[t1] = 1 << s2
    nbr[s2] = block.masks[s2] & ~(1 << t1)
    exhaustive = block.n <= cutoff
    search = LongestPathSearch(
        nbr,
        s1,
        t2,
        full_mask(block.n),
        required=(1 << t1) | (1 << s2),
        upper_limit=None if exhaustive else 1,
        prune_degrees=False,
    )
    found = search.run()
    if found is None:
        return None
    cut = found.index(t1) + 1
    first, second = list(found[:cut]), list(found[cut:])
    if not exhaustive:
        first, second = _lengthen(block, [first, second])
    return tuple(first), tuple(second)


def longest_path_between(
    block: Graph, u1: int, u2: int, cutoff: int = DEFAULT_BLOCK_CUTOFF
) -> Path:
    """
    A longest ``u1``-``u2`` path.

    Raises:
        InvalidGraphError: if the endpoints coincide or are disconnected.
    """
    if u1 == u2:
        raise InvalidGraphError("path endpoints must differ")
    exhaustive = block.n <= cutoff
    search = LongestPathSearch(
        block.masks, u1, u2, full_mask(block.n), upper_limit=block.n if exhaustive else 1
    )
    found = search.run()
    if found is None:
        raise InvalidGraphError(f"vertices {u1} and {u2} are disconnected")
    if exhaustive:
        return found
    return tuple(_lengthen(block, [list(found)])[0])


# =============================================================================
# Transition systems
# =============================================================================


@dataclass(frozen=True)
class Transition:
    """An allowed pairing of trail edges at a block, with its realising paths."""

    pairs: Pairing
    paths: tuple[Path, ...]  # paths[k] joins the attachments of pairs[k], in G ids

    @property
    def length(self) -> int:
        return sum(len(p) for p in self.paths)

    def path_for(self, a: int, b: int) -> Path | None:
        """Path for the pair ``{a, b}``, or ``None`` if the pairing separates them."""
        for pair, path in zip(self.pairs, self.paths, strict=True):
            if pair == (min(a, b), max(a, b)):
                return path
        return None

    def to_dict(self) -> dict[str, Any]:
        return {
            "pairs": [list(p) for p in self.pairs],
            "paths": [list(p) for p in self.paths],
            "length": self.length,
        }


@dataclass
class BlockTransitions:
    block: int
    edges: tuple[int, ...]
    allowed: list[Transition] = field(default_factory=list)
    unrealised: list[Pairing] = field(default_factory=list)

    @property
    def best(self) -> Transition | None:
        return max(self.allowed, key=lambda t: t.length, default=None)

    def to_dict(self) -> dict[str, Any]:
        return {
            "block": self.block,
            "edges": list(self.edges),
            "allowed": [t.to_dict() for t in self.allowed],
            "unrealised": [[list(p) for p in pairing] for pairing in self.unrealised],
        }


@dataclass
class TransitionSystem:
    """Allowed transitions for every vertex of T, keyed by block id."""

    blocks: dict[int, BlockTransitions]

    def restricted_to_best(self) -> "TransitionSystem":
        """Keep only the longest allowed pairing at each block."""
        return TransitionSystem(
            {
                i: BlockTransitions(bt.block, bt.edges, [bt.best] if bt.best else [], [])
                for i, bt in self.blocks.items()
            }
        )

    def allows(self, block: int, a: int, b: int) -> Transition | None:
        for t in self.blocks[block].allowed:
            if t.path_for(a, b) is not None:
                return t
        return None

    @property
    def findings(self) -> list[dict[str, Any]]:
        return [
            {"block": bt.block, "pairing": [list(p) for p in pairing]}
            for bt in self.blocks.values()
            for pairing in bt.unrealised
            if len(bt.edges) == 4
        ]

    def to_dict(self) -> dict[str, Any]:
        return {
            "blocks": [self.blocks[i].to_dict() for i in sorted(self.blocks)],
            "findings": self.findings,
        }


def pairings(edges: Sequence[int]) -> list[Pairing]:
    """The three ways to split four edge ids into two pairs (one way for two)."""
    a, *rest = sorted(edges)
    if not rest:
        raise InvalidGraphError("a vertex of T needs degree 2 or 4")
    if len(rest) == 1:
        return [((a, rest[0]),)]
    b, c, d = rest
    return [((a, b), (c, d)), ((a, c), (b, d)), ((a, d), (b, c))]


@dataclass
class _BlockJob:
    block: int
    members: list[int]
    graph: Graph
    ends: dict[int, int]  # T edge id -> local attachment vertex
    edges: tuple[int, ...]
    cutoff: int


def _solve_block(job: _BlockJob) -> BlockTransitions:
    bt = BlockTransitions(job.block, job.edges)
    for pairing in pairings(job.edges):
        ends = [(job.ends[a], job.ends[b]) for a, b in pairing]
        if len(pairing) == 1:
            try:
                paths: tuple[Path, ...] | None = (
                    longest_path_between(job.graph, *ends[0], cutoff=job.cutoff),
                )
            except InvalidGraphError:
                paths = None
        else:
            paths = two_disjoint_paths(job.graph, *ends[0], *ends[1], cutoff=job.cutoff)
        if paths is None:
            bt.unrealised.append(pairing)
            continue
        lifted = tuple(tuple(job.members[v] for v in p) for p in paths)
        bt.allowed.append(Transition(pairing, lifted))
    return bt


def build_transition_system(
    g: Graph,
    bm: BlockMap,
    t: MultiGraph,
    cutoff: int = DEFAULT_BLOCK_CUTOFF,
    jobs: int = 1,
) -> TransitionSystem:
    """
    Allowed pairings at every vertex of ``t``, each with realising block paths.

    Pairings without a realisation at a degree-4 vertex are kept as
    findings and logged.
    """
    work = []
    for i in range(t.n):
        edges = t.incidence[i]
        members = bm.blocks[i]
        graph, keep = g.induced(members)
        local = {v: k for k, v in enumerate(keep)}
        ends = {eid: local[bm.attachment_of_edge(i, t.labels[eid])] for eid in edges}
        work.append(_BlockJob(i, keep, graph, ends, tuple(edges), cutoff))

    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            solved = list(pool.map(_solve_block, work))
    else:
        solved = [_solve_block(job) for job in work]

    system = TransitionSystem({bt.block: bt for bt in solved})
    for finding in system.findings:
        logger.warning(
            f"Block {finding['block']}: pairing {finding['pairing']} has no disjoint paths"
        )
    return system


# =============================================================================
# Compatible eulerian trails
# =============================================================================


@dataclass(frozen=True)
class Trail:
    """A closed trail given by its start vertex and edge ids in order."""

    start: int
    edges: tuple[int, ...]

    def vertices(self, t: MultiGraph) -> list[int]:
        """``vertices[k]`` is where edge ``k`` starts."""
        out = [self.start]
        for eid in self.edges[:-1]:
            out.append(t.other_end(eid, out[-1]))
        return out


def compatible_eulerian_trail(t: MultiGraph, ts: TransitionSystem) -> Trail:
    """
    A closed eulerian trail whose transitions are allowed everywhere.

    Backtracks over the next edge in ascending id order. The first pass
    through a degree-4 vertex fixes its pairing, so the second pass is
    forced. Branches whose unused edges are no longer reachable are cut.

    Raises:
        NoCompatibleTrailError: when no such trail exists.
    """
    m = len(t.edges)
    if m == 0:
        raise NoCompatibleTrailError("T has no edges")
    for v in range(t.n):
        if t.degree(v) % 2 or not ts.blocks.get(v) or not ts.blocks[v].allowed:
            raise NoCompatibleTrailError(f"vertex {v} has no allowed transition")

    start = t.edges[0][0]
    used = [False] * m
    used[0] = True
    trail = [0]
    chosen: dict[int, Transition] = {}

    def unused_connected(cur: int) -> bool:
        seen = {cur}
        queue = deque([cur])
        while queue:
            v = queue.popleft()
            for eid in t.incidence[v]:
                if not used[eid]:
                    w = t.other_end(eid, v)
                    if w not in seen:
                        seen.add(w)
                        queue.append(w)
        return all(used[i] or t.edges[i][0] in seen for i in range(m))

    def extend(cur: int, incoming: int) -> bool:
        if len(trail) == m:
            if cur != start:
                return False
            return ts.allows(start, incoming, trail[0]) is not None and (
                start not in chosen or chosen[start].path_for(incoming, trail[0]) is not None
            )
        if not unused_connected(cur):
            return False
        for out in t.incidence[cur]:
            if used[out]:
                continue
            if cur in chosen:
                if chosen[cur].path_for(incoming, out) is None:
                    continue
                fixed = False
            else:
                transition = ts.allows(cur, incoming, out)
                if transition is None:
                    continue
                chosen[cur] = transition
                fixed = True
            used[out] = True
            trail.append(out)
            if extend(t.other_end(out, cur), out):
                return True
            trail.pop()
            used[out] = False
            if fixed:
                del chosen[cur]
        return False

    if not extend(t.other_end(0, start), 0):
        raise NoCompatibleTrailError("no eulerian trail respects the allowed transitions")
    return Trail(start, tuple(trail))


# =============================================================================
# Construction
# =============================================================================


@dataclass
class ConstructedCycle:
    """A verified cycle of G lifted from a compatible trail of T."""

    cycle: Cycle
    trail: Trail
    trail_labels: tuple[int, ...]
    per_block_paths: dict[int, list[Path]]
    mode: SubgraphMode
    findings: list[dict[str, Any]] = field(default_factory=list)

    @property
    def length(self) -> int:
        return len(self.cycle)

    def to_dict(self) -> dict[str, Any]:
        return {
            "length": self.length,
            "cycle": self.cycle.to_list(),
            "mode": self.mode.value,
            "trail": list(self.trail.edges),
            "trail_frame_edges": list(self.trail_labels),
            "per_block_paths": {
                str(i): [list(p) for p in paths]
                for i, paths in sorted(self.per_block_paths.items())
            },
            "findings": self.findings,
        }


def _assemble(
    t: MultiGraph, bm: BlockMap, ts: TransitionSystem, trail: Trail
) -> tuple[list[int], dict[int, list[Path]]]:
    starts = trail.vertices(t)
    m = len(trail.edges)
    vertices: list[int] = []
    per_block: dict[int, list[Path]] = {}
    for k in list(range(1, m)) + [0]:
        block = starts[k]
        incoming, outgoing = trail.edges[k - 1], trail.edges[k]
        transition = ts.allows(block, incoming, outgoing)
        path = transition.path_for(incoming, outgoing) if transition else None
        if path is None:
            raise NoCompatibleTrailError(f"transition at block {block} lost during assembly")
        entry = bm.attachment_of_edge(block, t.labels[incoming])
        if path[0] != entry:
            path = tuple(reversed(path))
        vertices.extend(path)
        per_block.setdefault(block, []).append(path)
    return vertices, per_block


def _check_contraction(
    bm: BlockMap, t: MultiGraph, cycle: Cycle, trail: Trail
) -> tuple[int, ...]:
    tag = {v: fid for a in bm.attachments for v, fid in a}
    vs = cycle.vertices
    crossings = []
    for k in range(len(vs)):
        u, v = vs[k - 1], vs[k]
        if bm.block_of[u] != bm.block_of[v]:
            crossings.append(tag[u])
    labels = tuple(t.labels[e] for e in trail.edges)
    if tuple(crossings) != labels:
        raise ValidationFailure(
            "contraction", f"cycle crosses frame edges {crossings}, trail uses {list(labels)}"
        )
    if {bm.block_of[v] for v in vs} != set(range(bm.block_count)):
        raise ValidationFailure("contraction", "cycle misses a block")
    return labels


def construct_long_cycle(
    g: Graph,
    bm: BlockMap,
    f: MultiGraph,
    mode: SubgraphMode = SubgraphMode.FULL,
    cutoff: int = DEFAULT_BLOCK_CUTOFF,
    jobs: int = 1,
) -> ConstructedCycle:
    """
    Build a cycle of ``G = S(H, F, e)`` whose block contraction is an
    eulerian trail of a spanning eulerian subgraph of ``f``.

    The longest pairing of each block is tried first; the full transition
    system is the fallback. The cycle is validated against ``g`` and its
    contraction is checked edge for edge against the trail.
    """
    if bm.block_count != f.n:
        raise SubstitutionError(f"block map has {bm.block_count} blocks, frame has {f.n} vertices")
    t = spanning_eulerian_subgraph(f, mode)
    ts = build_transition_system(g, bm, t, cutoff=cutoff, jobs=jobs)

    used_ts = ts.restricted_to_best()
    try:
        trail = compatible_eulerian_trail(t, used_ts)
    except NoCompatibleTrailError:
        logger.info("Best pairings admit no compatible trail; using every allowed pairing")
        used_ts = ts
        trail = compatible_eulerian_trail(t, used_ts)

    vertices, per_block = _assemble(t, bm, used_ts, trail)
    cycle = Cycle(tuple(vertices))
    cycle.validate(g)
    for paths in per_block.values():
        for p in paths:
            validate_path(g, p)
    labels = _check_contraction(bm, t, cycle, trail)

    logger.info(
        f"Constructed cycle of length {len(cycle)} on {g.n} vertices "
        f"through {bm.block_count} blocks ({mode.value} subgraph)"
    )
    return ConstructedCycle(cycle, trail, labels, per_block, mode, ts.findings)
