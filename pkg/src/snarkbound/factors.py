"""
Perfect matchings, 2-factors and oddness of cubic graphs.

In a cubic graph the 2-factors are exactly the complements of perfect
matchings, so everything here is driven by one perfect-matching
enumerator that always matches the lowest uncovered vertex next. That
order is lexicographic in the sorted edge lists of the matchings.
"""

import logging
from collections.abc import Iterable, Iterator, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any

from .graphs import Cycle, Edge, Graph, canonical_cycle, normalize_edge, require_cubic
from .models import INFINITE, Infinite, InvalidGraphError, NoTwoFactorError

logger = logging.getLogger(__name__)

Matching = tuple[Edge, ...]


def perfect_matchings(g: Graph, first: Edge | None = None) -> Iterator[Matching]:
    """
    Every perfect matching of ``g`` in lexicographic order.

    With ``first`` given only the matchings containing that edge (which must
    cover vertex 0) are produced.
    """
    if g.n % 2:
        return
    full = (1 << g.n) - 1
    chosen: list[Edge] = []

    def extend(covered: int) -> Iterator[Matching]:
        if covered == full:
            yield tuple(chosen)
            return
        free = ~covered & full
        u = (free & -free).bit_length() - 1
        for w in g.adjacency[u]:
            if (covered >> w) & 1:
                continue
            chosen.append((u, w))
            yield from extend(covered | (1 << u) | (1 << w))
            chosen.pop()

    if first is not None:
        u, w = normalize_edge(*first)
        if u != 0 or not g.has_edge(u, w):
            raise InvalidGraphError(f"first edge must be an edge at vertex 0, got {first}")
        chosen.append((u, w))
        yield from extend(1 | (1 << w))
    else:
        yield from extend(0)


def count_perfect_matchings(g: Graph) -> int:
    return sum(1 for _ in perfect_matchings(g))


@dataclass(frozen=True)
class TwoFactor:
    """Vertex-disjoint cycles covering the graph, with the matching it complements."""

    cycles: tuple[Cycle, ...]
    matching: Matching

    @property
    def odd_cycles(self) -> list[Cycle]:
        return [c for c in self.cycles if len(c) % 2]

    @property
    def odd_count(self) -> int:
        return len(self.odd_cycles)

    def odd_avoiding(self, x: int, y: int) -> int:
        """Odd cycles containing neither ``x`` nor ``y``."""
        return sum(1 for c in self.odd_cycles if x not in c.vertices and y not in c.vertices)

    def covers(self, n: int) -> bool:
        seen = [v for c in self.cycles for v in c.vertices]
        return len(seen) == n and set(seen) == set(range(n))

    def to_dict(self) -> dict[str, Any]:
        return {
            "cycles": [c.to_list() for c in self.cycles],
            "cycle_lengths": [len(c) for c in self.cycles],
            "matching": [list(e) for e in self.matching],
            "odd_cycles": self.odd_count,
        }


def two_factor_from_matching(g: Graph, matching: Iterable[Edge]) -> TwoFactor:
    """Split the complement of a perfect matching into its cycles."""
    matching = tuple(sorted(normalize_edge(*e) for e in matching))
    removed = set(matching)
    rest: list[list[int]] = [
        [w for w in g.adjacency[v] if normalize_edge(v, w) not in removed] for v in range(g.n)
    ]
    seen = [False] * g.n
    cycles = []
    for v in range(g.n):
        if seen[v]:
            continue
        walk = [v]
        seen[v] = True
        prev, cur = v, rest[v][0]
        while cur != v:
            walk.append(cur)
            seen[cur] = True
            a, b = rest[cur]
            prev, cur = cur, (b if a == prev else a)
        cycles.append(Cycle(canonical_cycle(walk)))
    return TwoFactor(tuple(cycles), matching)


def enumerate_two_factors(g: Graph) -> Iterator[TwoFactor]:
    """Every 2-factor of the cubic graph ``g`` exactly once."""
    require_cubic(g)
    for pm in perfect_matchings(g):
        yield two_factor_from_matching(g, pm)


@dataclass
class OddnessReport:
    """Oddness with its witness and, when an edge was given, the forced odd count."""

    oddness: int | Infinite
    witness: TwoFactor | None = None
    two_factor_count: int | None = None
    edge: Edge | None = None
    forced_odd_avoiding_e: int | None = None

    def to_dict(self) -> dict[str, Any]:
        result: dict[str, Any] = {"oddness": self.oddness}
        if self.witness is not None:
            result["witness"] = self.witness.to_dict()
        if self.two_factor_count is not None:
            result["two_factor_count"] = self.two_factor_count
        if self.edge is not None:
            result["edge"] = list(self.edge)
            result["forced_odd_avoiding_e"] = self.forced_odd_avoiding_e
        return result


def _branch_minimum(args: tuple[Graph, Edge | None]) -> tuple[int | None, Matching | None]:
    """Smallest odd-cycle count in one branch, with its first matching."""
    g, first = args
    best: int | None = None
    witness = None
    for pm in perfect_matchings(g, first):
        count = two_factor_from_matching(g, pm).odd_count
        if best is None or count < best:
            best, witness = count, pm
            if best == 0:
                break
    return best, witness


def oddness(g: Graph, e: Sequence[int] | None = None, jobs: int = 1) -> OddnessReport:
    """
    Minimum number of odd cycles over all 2-factors, ``"infinite"`` if none.

    Without an edge the search stops at the first 2-factor without odd
    cycles. With ``jobs > 1`` the matchings are split by the edge covering
    vertex 0 and the branches are reduced by minimum in branch order, which
    keeps the witness the lexicographically smallest optimal matching.
    """
    require_cubic(g)
    edge = g.require_edge(e) if e is not None else None

    if edge is not None:
        factors = list(enumerate_two_factors(g))
        if not factors:
            return OddnessReport(INFINITE, two_factor_count=0, edge=edge)
        witness = min(factors, key=lambda f: f.odd_count)
        return OddnessReport(
            oddness=witness.odd_count,
            witness=witness,
            two_factor_count=len(factors),
            edge=edge,
            forced_odd_avoiding_e=forced_odd_count(g, edge, factors),
        )

    branches: list[Edge | None] = [(0, w) for w in g.adjacency[0]] if jobs > 1 else [None]
    if len(branches) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_branch_minimum, [(g, b) for b in branches]))
    else:
        results = [_branch_minimum((g, None))]

    best: int | None = None
    best_matching: Matching | None = None
    for count, pm in results:
        if count is not None and (best is None or count < best):
            best, best_matching = count, pm
    if best is None or best_matching is None:
        logger.info(f"{g.n}-vertex graph has no 2-factor")
        return OddnessReport(INFINITE)
    return OddnessReport(oddness=best, witness=two_factor_from_matching(g, best_matching))


def forced_odd_count(
    g: Graph, e: Sequence[int], factors: Sequence[TwoFactor] | None = None
) -> int:
    """
    Minimum over 2-factors of the number of odd cycles avoiding both ends of ``e``.

    Raises:
        NoTwoFactorError: if ``g`` has no 2-factor.
        EdgeNotFoundError: if ``e`` is not an edge of ``g``.
    """
    x, y = g.require_edge(e)
    best: int | None = None
    source = factors if factors is not None else enumerate_two_factors(g)
    for f in source:
        count = f.odd_avoiding(x, y)
        if best is None or count < best:
            best = count
            if best == 0:
                break
    if best is None:
        raise NoTwoFactorError(f"{g.n}-vertex graph has no 2-factor")
    return best
