"""
Exact cycle searches.

Everything here runs on neighbourhood bitmasks: longest cycles and paths by
branch-and-bound, the four constrained cycle maxima around an edge, full
cycle enumeration, and dominating cycles through a prescribed matching.
"""

import itertools
import logging
from collections.abc import Iterator, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any

from .graphs import Cycle, Edge, Graph, popcount, validate_matching
from .models import InvalidGraphError, sentinel

logger = logging.getLogger(__name__)


def flood(nbr: Sequence[int], sources: int, allowed: int) -> int:
    """Vertices of ``allowed`` reachable from the ``sources`` mask (sources excluded)."""
    reach = 0
    frontier = sources
    while frontier:
        step = 0
        f = frontier
        while f:
            low = f & -f
            step |= nbr[low.bit_length() - 1]
            f ^= low
        frontier = step & allowed & ~reach & ~sources
        reach |= frontier
    return reach


class LongestPathSearch:
    """
    Branch-and-bound search for a longest path or cycle on bitmask adjacency.

    The search extends a simple path from ``start`` one vertex at a time,
    neighbours in ascending order. When ``end == start`` it looks for cycles
    through ``start`` (length at least 3, each cycle in the orientation whose
    second vertex is smaller than its last); otherwise for ``start``-``end``
    paths. Only vertices of ``avail`` are used and every vertex of
    ``required`` must be visited. Lengths count vertices.

    Only results strictly longer than ``lower_bound`` are kept, so the
    witness is the first optimum in search order. The search stops early once
    ``upper_limit`` is reached.

    ``nbr`` may be directed; degree pruning then has to be switched off.
    """

    def __init__(
        self,
        nbr: Sequence[int],
        start: int,
        end: int,
        avail: int,
        required: int = 0,
        lower_bound: int = 0,
        upper_limit: int | None = None,
        prune_degrees: bool = True,
    ):
        self.nbr = nbr
        self.start = start
        self.end = end
        self.cycle = start == end
        self.avail = avail
        self.required = required
        self.best = lower_bound
        self.best_path: tuple[int, ...] | None = None
        self.upper_limit = upper_limit
        self.prune_degrees = prune_degrees
        self.nodes = 0
        self._done = False

    def run(self) -> tuple[int, ...] | None:
        """Run the search; returns the best path (or cycle) found, or ``None``."""
        if not (self.avail >> self.start) & 1 or not (self.avail >> self.end) & 1:
            return None
        if self.upper_limit is not None and self.upper_limit <= self.best:
            return None
        self._extend([self.start], 1 << self.start)
        return self.best_path

    def _record(self, path: list[int]) -> None:
        self.best = len(path)
        self.best_path = tuple(path)
        if self.upper_limit is not None and self.best >= self.upper_limit:
            self._done = True

    def _extend(self, path: list[int], visited: int) -> None:
        self.nodes += 1
        cur = path[-1]
        nbr = self.nbr
        missing = self.required & ~visited

        if self.cycle:
            if (
                len(path) >= 3
                and (nbr[cur] >> self.start) & 1
                and path[1] < cur
                and len(path) > self.best
                and not missing
            ):
                self._record(path)
                if self._done:
                    return
        elif cur == self.end:
            if len(path) > self.best and not missing:
                self._record(path)
            return

        free = self.avail & ~visited
        reach = flood(nbr, 1 << cur, free)
        if missing & ~reach:
            return
        if self.cycle:
            if not reach & nbr[self.start]:
                return
        elif not (reach >> self.end) & 1:
            return

        if self.prune_degrees:
            closed = free | (1 << cur) | (1 << self.end)
            usable = 0
            r = reach
            while r:
                low = r & -r
                w = low.bit_length() - 1
                r ^= low
                if w == self.end or popcount(nbr[w] & closed) >= 2:
                    usable |= low
            if missing & ~usable:
                return
        else:
            usable = reach

        if len(path) + popcount(usable) <= self.best:
            return

        candidates = nbr[cur] & usable
        while candidates:
            low = candidates & -candidates
            candidates ^= low
            w = low.bit_length() - 1
            path.append(w)
            self._extend(path, visited | low)
            path.pop()
            if self._done:
                return


def full_mask(n: int) -> int:
    return (1 << n) - 1


def mask_of(vertices: Sequence[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def longest_cycle_through(
    g: Graph,
    v: int,
    avail: int | None = None,
    required: int = 0,
    lower_bound: int = 2,
    nbr: Sequence[int] | None = None,
) -> tuple[int, ...] | None:
    """Longest cycle through ``v`` inside ``avail``, or ``None``."""
    nbr = nbr if nbr is not None else g.masks
    avail = full_mask(g.n) if avail is None else avail
    search = LongestPathSearch(
        nbr, v, v, avail, required=required, lower_bound=lower_bound,
        upper_limit=popcount(avail),
    )
    return search.run()


# =============================================================================
# Circumference
# =============================================================================


RootTask = tuple[tuple[int, ...], int, int, int]


def _root_search(args: RootTask) -> tuple[int, tuple[int, ...] | None]:
    masks, n, root, lower_bound = args
    avail = full_mask(n) & ~((1 << root) - 1)
    search = LongestPathSearch(masks, root, root, avail, lower_bound=lower_bound,
                               upper_limit=popcount(avail))
    path = search.run()
    logger.debug(f"Root {root}: {search.nodes} nodes, best {search.best}")
    return root, path


def circumference(g: Graph, jobs: int = 1) -> tuple[int, Cycle]:
    """
    Exact length of a longest cycle, with a witness.

    Roots are tried in ascending order, each looking only at cycles whose
    smallest vertex is the root. With ``jobs > 1`` the remaining roots run in
    a process pool after root 0; the witness is the same as for a serial run.

    Raises:
        InvalidGraphError: if ``g`` has no cycle.
    """
    masks = g.masks
    best = 2
    witness: tuple[int, ...] | None = None

    if jobs <= 1 or g.n < 8:
        for root in range(g.n):
            if g.n - root <= best:
                break
            _, path = _root_search((masks, g.n, root, best))
            if path is not None:
                best, witness = len(path), path
    else:
        _, path = _root_search((masks, g.n, 0, best))
        if path is not None:
            best, witness = len(path), path
        roots = [r for r in range(1, g.n) if g.n - r > best]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            found = list(pool.map(_root_search, [(masks, g.n, r, best) for r in roots]))
        for _, path in found:
            if path is not None and len(path) > best:
                best, witness = len(path), path

    if witness is None:
        raise InvalidGraphError("graph has no cycle")
    return best, Cycle(witness)


# =============================================================================
# Constrained maxima around an edge
# =============================================================================


@dataclass
class ConstrainedMaxima:
    """
    Longest cycles of four kinds relative to an edge ``e = xy``.

    ``None`` marks an empty class.
    """

    edge: Edge
    through_e: int | None
    one_endpoint: int | None
    both_avoid_e: int | None
    two_cycles: int | None

    def as_tuple(self) -> tuple[int | None, int | None, int | None, int | None]:
        return (self.through_e, self.one_endpoint, self.both_avoid_e, self.two_cycles)

    def to_dict(self) -> dict[str, Any]:
        return {
            "edge": list(self.edge),
            "L_through_e": sentinel(self.through_e),
            "L_one_endpoint": sentinel(self.one_endpoint),
            "L_both_avoid_e": sentinel(self.both_avoid_e),
            "L_two_cycles": sentinel(self.two_cycles),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ConstrainedMaxima":
        def value(key: str) -> int | None:
            raw = data.get(key)
            return None if raw in (None, "none") else int(raw)

        return cls(
            edge=(data["edge"][0], data["edge"][1]),
            through_e=value("L_through_e"),
            one_endpoint=value("L_one_endpoint"),
            both_avoid_e=value("L_both_avoid_e"),
            two_cycles=value("L_two_cycles"),
        )


def _without_edge(masks: Sequence[int], x: int, y: int) -> list[int]:
    nbr = list(masks)
    nbr[x] &= ~(1 << y)
    nbr[y] &= ~(1 << x)
    return nbr


def _length(path: tuple[int, ...] | None) -> int | None:
    return None if path is None else len(path)


def cycles_through(nbr: Sequence[int], root: int, avail: int) -> Iterator[tuple[int, ...]]:
    """Every cycle through ``root`` inside ``avail``, once each."""
    path = [root]

    def walk(visited: int) -> Iterator[tuple[int, ...]]:
        cur = path[-1]
        if len(path) >= 3 and (nbr[cur] >> root) & 1 and path[1] < cur:
            yield tuple(path)
        candidates = nbr[cur] & avail & ~visited
        while candidates:
            low = candidates & -candidates
            candidates ^= low
            path.append(low.bit_length() - 1)
            yield from walk(visited | low)
            path.pop()

    if (avail >> root) & 1:
        yield from walk(1 << root)


class DisjointPairSearch:
    """
    Vertex-disjoint cycles ``C1 ∋ x`` and ``C2 ∋ y`` of maximum total length.

    ``C1`` is grown depth-first from ``x`` avoiding ``y``. Whenever it closes
    into a cycle on a new vertex set, a longest cycle through ``y`` is searched
    in what is left. A partial ``C1`` is dropped once its length plus every
    vertex still reachable from its end or from ``y`` cannot beat the best
    pair found so far.
    """

    def __init__(self, masks: Sequence[int], n: int, x: int, y: int):
        self.masks = masks
        self.x = x
        self.y = y
        self.everything = full_mask(n)
        self.best: tuple[int, Cycle, Cycle] | None = None
        self.tried: set[int] = set()
        self.nodes = 0

    @property
    def floor(self) -> int:
        return self.best[0] if self.best is not None else 0

    def run(self) -> tuple[int, Cycle, Cycle] | None:
        self._grow([self.x], 1 << self.x)
        return self.best

    def _pair(self, path: list[int], cmask: int) -> None:
        size = len(path)
        rest = self.everything & ~cmask
        room = popcount(flood(self.masks, 1 << self.y, rest)) + 1
        if size + room <= self.floor:
            return
        search = LongestPathSearch(
            self.masks, self.y, self.y, rest,
            lower_bound=max(2, self.floor - size), upper_limit=room,
        )
        found = search.run()
        if found is not None:
            self.best = (size + len(found), Cycle(tuple(path)), Cycle(found))

    def _grow(self, path: list[int], visited: int) -> None:
        self.nodes += 1
        masks, cur = self.masks, path[-1]
        if len(path) >= 3 and (masks[cur] >> self.x) & 1 and visited not in self.tried:
            self.tried.add(visited)
            self._pair(path, visited)

        free = self.everything & ~visited
        ahead = flood(masks, 1 << cur, free & ~(1 << self.y))
        if not ahead & masks[self.x]:
            return
        around_y = flood(masks, 1 << self.y, free) | (1 << self.y)
        if len(path) + popcount(ahead | around_y) <= self.floor:
            return

        candidates = masks[cur] & ahead
        while candidates:
            low = candidates & -candidates
            candidates ^= low
            path.append(low.bit_length() - 1)
            self._grow(path, visited | low)
            path.pop()


def disjoint_cycle_pair(
    g: Graph, x: int, y: int
) -> tuple[int, Cycle, Cycle] | None:
    """Vertex-disjoint cycles ``C1 ∋ x`` and ``C2 ∋ y`` of maximum total length."""
    if x == y:
        raise InvalidGraphError("disjoint cycle pair needs two distinct vertices")
    search = DisjointPairSearch(g.masks, g.n, x, y)
    found = search.run()
    logger.debug(f"Disjoint pair search {x}/{y}: {search.nodes} nodes, {len(search.tried)} C1 sets")
    return found


def max_disjoint_cycle_pair(g: Graph, x: int, y: int) -> int | None:
    """Maximum ``|C1| + |C2|`` over disjoint cycles with ``x ∈ C1``, ``y ∈ C2``."""
    found = disjoint_cycle_pair(g, x, y)
    return None if found is None else found[0]


def constrained_maxima(g: Graph, e: Sequence[int]) -> ConstrainedMaxima:
    """
    The four constrained cycle maxima for edge ``e = xy``.

    Raises:
        EdgeNotFoundError: if ``e`` is not an edge of ``g``.
    """
    x, y = g.require_edge(e)
    masks = g.masks
    everything = full_mask(g.n)
    cut = _without_edge(masks, x, y)

    through = LongestPathSearch(cut, x, y, everything, upper_limit=g.n).run()
    one_x = longest_cycle_through(g, x, avail=everything & ~(1 << y))
    one_y = longest_cycle_through(g, y, avail=everything & ~(1 << x))
    lengths = [n for n in (_length(one_x), _length(one_y)) if n is not None]
    both = longest_cycle_through(g, x, required=1 << y, nbr=cut)

    maxima = ConstrainedMaxima(
        edge=(x, y),
        through_e=_length(through),
        one_endpoint=max(lengths) if lengths else None,
        both_avoid_e=_length(both),
        two_cycles=max_disjoint_cycle_pair(g, x, y),
    )
    logger.debug(f"Constrained maxima for edge {x}-{y}: {maxima.as_tuple()}")
    return maxima


# =============================================================================
# Enumeration
# =============================================================================


def enumerate_cycles(g: Graph) -> Iterator[Cycle]:
    """
    Every cycle of ``g`` exactly once, in canonical form.

    A cycle is produced from its smallest vertex, in the orientation whose
    second vertex is smaller than its last, which is exactly the minimal
    rotation of the lexicographically smaller orientation.
    """
    masks = g.masks
    for root in range(g.n):
        avail = full_mask(g.n) & ~((1 << root) - 1)
        for c in cycles_through(masks, root, avail):
            yield Cycle(c)


# =============================================================================
# Dominating cycles
# =============================================================================


class DominatingCycleSearch:
    """
    Backtracking search for a cycle through ``root`` that contains every
    edge of a matching and leaves an independent set off the cycle.

    Matched vertices force their mate as the next vertex. A branch dies as
    soon as two adjacent vertices, or a matched vertex, can no longer be
    reached.
    """

    def __init__(self, g: Graph, matching: Sequence[Edge], root: int, excluded: int = 0):
        self.g = g
        self.nbr = g.masks
        self.root = root
        self.excluded = excluded
        self.mate: dict[int, int] = {}
        for u, v in matching:
            self.mate[u] = v
            self.mate[v] = u
        self.matched = mask_of(list(self.mate))
        self.everything = full_mask(g.n)
        self.nodes = 0

    def run(self) -> tuple[int, ...] | None:
        root = self.root
        if (self.excluded >> root) & 1 or self.matched & self.excluded:
            return None
        path = [root]
        mate = self.mate.get(root)
        if mate is not None:
            path.append(mate)
            return self._extend(path, (1 << root) | (1 << mate))
        return self._extend(path, 1 << root)

    def _closes(self, path: list[int], visited: int) -> bool:
        cur = path[-1]
        if len(path) < 3 or not (self.nbr[cur] >> self.root) & 1:
            return False
        if self.matched & ~visited:
            return False
        if self.mate.get(cur, self.root) != self.root and self.mate[cur] != path[-2]:
            return False
        off = self.everything & ~visited
        r = off
        while r:
            low = r & -r
            r ^= low
            if self.nbr[low.bit_length() - 1] & off:
                return False
        return True

    def _extend(self, path: list[int], visited: int) -> tuple[int, ...] | None:
        self.nodes += 1
        cur = path[-1]
        if self._closes(path, visited):
            return tuple(path)

        free = self.everything & ~visited & ~self.excluded
        mate = self.mate.get(cur)
        if mate is not None and mate != path[-2]:
            if not (free >> mate) & 1:
                return None
            candidates = 1 << mate
        else:
            candidates = self.nbr[cur] & free

        reach = flood(self.nbr, 1 << cur, free)
        dead = self.everything & ~visited & ~reach
        if dead & self.matched:
            return None
        d = dead
        while d:
            low = d & -d
            d ^= low
            if self.nbr[low.bit_length() - 1] & dead:
                return None
        if not (reach & self.nbr[self.root]) and not (self.nbr[cur] >> self.root) & 1:
            return None

        while candidates:
            low = candidates & -candidates
            candidates ^= low
            w = low.bit_length() - 1
            path.append(w)
            found = self._extend(path, visited | low)
            path.pop()
            if found is not None:
                return found
        return None


def dominating_cycle_containing(g: Graph, matching: Sequence[Sequence[int]] = ()) -> Cycle | None:
    """
    A dominating cycle containing every edge of ``matching``, or ``None``.

    With an empty matching this is the plain existence check: a dominating
    cycle either passes through vertex 0 or through all its neighbours.

    Raises:
        InvalidGraphError: if ``matching`` is not a matching of ``g``.
    """
    edges = validate_matching(g, matching)
    if g.n < 3:
        return None
    if edges:
        attempts = [(edges[0][0], 0)]
    else:
        attempts = [(0, 0)]
        if g.adjacency[0]:
            attempts.append((g.adjacency[0][0], 1))
    for root, excluded in attempts:
        found = DominatingCycleSearch(g, edges, root, excluded).run()
        if found is not None:
            cycle = Cycle(found)
            cycle.validate(g)
            return cycle
    return None


def is_dominating(g: Graph, cycle: Cycle) -> bool:
    on = cycle.vertex_set()
    return all(u in on or v in on for u, v in g.edges)


# =============================================================================
# Matching surveys
# =============================================================================


def iter_matchings(g: Graph, k: int) -> Iterator[tuple[Edge, ...]]:
    """Matchings of size ``k`` in lexicographic order of sorted edge ids."""
    for combo in itertools.combinations(g.edges, k):
        ends = [v for e in combo for v in e]
        if len(set(ends)) == 2 * k:
            yield combo


@dataclass
class SurveyReport:
    """Which size-``k`` matchings extend to a dominating cycle."""

    k: int
    start: int = 0
    total: int = 0
    checked: int = 0
    failing: list[tuple[int, tuple[Edge, ...]]] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {
            "k": self.k,
            "start": self.start,
            "total_matchings": self.total,
            "checked": self.checked,
            "failing_count": len(self.failing),
            "failing": [
                {"index": i, "matching": [list(e) for e in m]} for i, m in self.failing
            ],
        }


def _survey_one(args: tuple[Graph, int, tuple[Edge, ...]]) -> tuple[int, bool]:
    g, index, matching = args
    return index, dominating_cycle_containing(g, matching) is not None


def matching_survey(g: Graph, k: int, start: int = 0, jobs: int = 1) -> SurveyReport:
    """
    Test every matching of size ``k`` (from index ``start``) for a dominating
    cycle containing it. Failing matchings are reported with their index.
    """
    report = SurveyReport(k=k, start=start)
    work = []
    for index, m in enumerate(iter_matchings(g, k)):
        report.total += 1
        if index >= start:
            work.append((g, index, m))

    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_survey_one, work, chunksize=max(1, len(work) // (jobs * 4))))
    else:
        outcomes = [_survey_one(item) for item in work]

    matchings = {index: m for _, index, m in work}
    for index, ok in sorted(outcomes):
        report.checked += 1
        if not ok:
            report.failing.append((index, matchings[index]))
    logger.info(
        f"Matching survey k={k}: {report.checked} checked, {len(report.failing)} failing"
    )
    return report
