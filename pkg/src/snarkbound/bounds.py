"""
Shortness-coefficient and oddness-growth bounds for substitution families,
and scans of host lists for edges that give good bounds.

All ratios are exact ``Fraction`` values.
"""

import json
import logging
from collections.abc import Callable, Sequence
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from .cycles import ConstrainedMaxima, constrained_maxima
from .factors import TwoFactor, enumerate_two_factors, forced_odd_count
from .formats import serialize_graph6
from .graphs import Edge, Graph, require_cubic
from .models import (
    InvalidGraphError,
    JournalEntry,
    NoTwoFactorError,
    ScanJournal,
    SnarkboundError,
)

logger = logging.getLogger(__name__)

# vertices of the host cycle lost outside the block, per cycle class
BLOCK_OFFSETS = (2, 1, 2, 2)


def per_block_bound(maxima: ConstrainedMaxima) -> int:
    """
    Most vertices a cycle of the family can use inside one block.

    Raises:
        InvalidGraphError: if all four cycle classes are empty.
    """
    values = [
        length - offset
        for length, offset in zip(maxima.as_tuple(), BLOCK_OFFSETS, strict=True)
        if length is not None
    ]
    if not values:
        raise InvalidGraphError("all four cycle classes are empty")
    return max(values)


def format_fraction(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def parse_fraction(text: str | int | Fraction) -> Fraction:
    """Parse ``"17/18"`` style ratios; floats are refused."""
    if isinstance(text, Fraction | int):
        return Fraction(text)
    if "." in str(text):
        raise ValueError(f"ratios must be exact, got {text!r}")
    return Fraction(str(text))


def family_oddness_bound(q: int, frame_size: int) -> int:
    """Lower bound on the oddness of ``S(H, F, e)`` for ``|F| = frame_size``, made even."""
    bound = q * frame_size
    return bound + (bound % 2)


@dataclass
class BoundReport:
    """Bounds for the family ``S(H, F_n, e)`` of one host and edge."""

    host: str
    edge: Edge
    maxima: ConstrainedMaxima
    block_size: int
    per_block: int
    q: int | None
    graph6: str = ""

    @property
    def coefficient(self) -> Fraction:
        return Fraction(self.per_block, self.block_size)

    @property
    def oddness_growth(self) -> Fraction | None:
        return None if self.q is None else Fraction(self.q, self.block_size)

    def to_dict(self) -> dict[str, Any]:
        growth = self.oddness_growth
        return {
            "host": self.host,
            "graph6": self.graph6,
            "edge": list(self.edge),
            "maxima": self.maxima.to_dict(),
            "block_size": self.block_size,
            "per_block": self.per_block,
            "coefficient": format_fraction(self.coefficient),
            "q": "none" if self.q is None else self.q,
            "oddness_growth": "none" if growth is None else format_fraction(growth),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "BoundReport":
        q = data.get("q")
        return cls(
            host=data["host"],
            edge=(data["edge"][0], data["edge"][1]),
            maxima=ConstrainedMaxima.from_dict(data["maxima"]),
            block_size=data["block_size"],
            per_block=data["per_block"],
            q=None if q in (None, "none") else int(q),
            graph6=data.get("graph6", ""),
        )


def shortness_report(
    h: Graph,
    e: Sequence[int],
    host: str = "",
    factors: Sequence[TwoFactor] | None = None,
) -> BoundReport:
    """
    Constrained maxima, per-block bound and forced odd count for ``(h, e)``.

    ``q`` is ``None`` when ``h`` has no 2-factor.
    """
    require_cubic(h, "host")
    edge = h.require_edge(e)
    maxima = constrained_maxima(h, edge)
    try:
        q: int | None = forced_odd_count(h, edge, factors)
    except NoTwoFactorError:
        q = None
    return BoundReport(
        host=host,
        edge=edge,
        maxima=maxima,
        block_size=h.n - 2,
        per_block=per_block_bound(maxima),
        q=q,
        graph6=serialize_graph6(h),
    )


def oddness_growth(
    h: Graph, e: Sequence[int], factors: Sequence[TwoFactor] | None = None
) -> Fraction:
    """``q(h, e) / (|h| - 2)``: odd cycles forced per vertex of the family."""
    require_cubic(h, "host")
    return Fraction(forced_odd_count(h, e, factors), h.n - 2)


# =============================================================================
# Scans
# =============================================================================


@dataclass
class ScanCriteria:
    """Which (host, edge) pairs a scan keeps. Unset fields do not filter."""

    max_coefficient: Fraction | None = None
    min_q: int | None = None

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ScanCriteria":
        raw = data.get("max_coefficient")
        return cls(
            max_coefficient=None if raw is None else parse_fraction(raw),
            min_q=data.get("min_q"),
        )

    @classmethod
    def from_json(cls, text: str) -> "ScanCriteria":
        try:
            data = json.loads(text) if text else {}
            if not isinstance(data, dict):
                raise ValueError("expected a JSON object")
            return cls.from_dict(data)
        except (json.JSONDecodeError, ValueError, ZeroDivisionError) as e:
            raise SnarkboundError(f"bad scan criteria: {e}") from e

    def accepts_q(self, q: int | None) -> bool:
        return self.min_q is None or (q is not None and q >= self.min_q)

    def accepts(self, report: BoundReport) -> bool:
        if self.max_coefficient is not None and report.coefficient > self.max_coefficient:
            return False
        return self.accepts_q(report.q)

    def to_dict(self) -> dict[str, Any]:
        return {
            "max_coefficient": (
                None if self.max_coefficient is None else format_fraction(self.max_coefficient)
            ),
            "min_q": self.min_q,
        }


@dataclass
class ScanResult:
    reports: list[BoundReport] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)
    examined: int = 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "examined": self.examined,
            "matches": [r.to_dict() for r in self.reports],
            "errors": self.errors,
        }


@dataclass
class _HostJob:
    index: int
    host: str
    graph: Graph
    criteria: ScanCriteria
    skip: frozenset[int]


EdgeSink = Callable[[int, int, dict[str, Any] | None], None]


def _scan_host(
    job: _HostJob, on_edge: EdgeSink | None = None
) -> tuple[int, list[tuple[int, dict[str, Any] | None]], str | None]:
    """
    Scan every edge of one host; ``None`` payloads mark rejected edges.

    ``on_edge`` is called with (host index, edge index, payload) as each
    edge finishes.
    """
    out: list[tuple[int, dict[str, Any] | None]] = []

    def finish(edge_index: int, payload: dict[str, Any] | None) -> None:
        out.append((edge_index, payload))
        if on_edge is not None:
            on_edge(job.index, edge_index, payload)

    try:
        require_cubic(job.graph, job.host)
        factors = list(enumerate_two_factors(job.graph))
        for edge_index, edge in enumerate(job.graph.edges):
            if edge_index in job.skip:
                continue
            q = forced_odd_count(job.graph, edge, factors) if factors else None
            if not job.criteria.accepts_q(q):
                finish(edge_index, None)
                continue
            report = shortness_report(job.graph, edge, job.host, factors)
            finish(edge_index, report.to_dict() if job.criteria.accepts(report) else None)
    except SnarkboundError as e:
        return job.index, out, f"{job.host}: {e}"
    return job.index, out, None


def scan_candidates(
    hosts: Sequence[tuple[str, Graph]],
    criteria: ScanCriteria,
    journal: ScanJournal | Path | None = None,
    jobs: int = 1,
) -> ScanResult:
    """
    Bound reports for every (host, edge) pair that meets ``criteria``.

    Per-host failures are collected and the scan goes on. With a journal,
    finished units are appended as they complete (per edge when serial, per
    host when parallel) and skipped when the scan is rerun. Results come out
    ordered by host then edge.
    """
    if isinstance(journal, Path):
        journal = ScanJournal(journal)
    done = journal.load() if journal is not None else {}
    if done:
        logger.info(f"Resuming scan: {len(done)} unit(s) already journaled")

    work = []
    for index, (host, graph) in enumerate(hosts):
        skip = frozenset(e for (h, e) in done if h == index)
        work.append(_HostJob(index, host, graph, criteria, skip))

    result = ScanResult()
    units: dict[tuple[int, int], dict[str, Any] | None] = {
        key: entry.payload for key, entry in done.items()
    }

    def record(index: int, edge_index: int, payload: dict[str, Any] | None) -> None:
        units[(index, edge_index)] = payload
        if journal is not None:
            journal.append(JournalEntry(index, edge_index, work[index].host, payload=payload))

    def collect(error: str | None) -> None:
        if error is not None:
            logger.warning(f"Scan error on host {error}")
            result.errors.append(error)

    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_scan_host, job) for job in work]
            for future in as_completed(futures):
                index, edges, error = future.result()
                for edge_index, payload in edges:
                    record(index, edge_index, payload)
                collect(error)
    else:
        for job in work:
            _, _, error = _scan_host(job, record)
            collect(error)

    result.examined = len(units)
    for key in sorted(units):
        payload = units[key]
        if payload is not None:
            result.reports.append(BoundReport.from_dict(payload))
    logger.info(
        f"Scanned {len(work)} host(s), {result.examined} edge(s): "
        f"{len(result.reports)} match(es), {len(result.errors)} error(s)"
    )
    return result
