"""
graph6 and sparse6 records plus newline-delimited record files.

Encoding and decoding go through networkx. This module checks records
before handing them over so that malformed input is reported with the
byte offset of the problem, and it rejects what networkx would accept
silently: nonzero graph6 padding, incremental sparse6 (``;``) and loops.
"""

import hashlib
import logging
from collections.abc import Callable, Iterator
from dataclasses import dataclass
from pathlib import Path

import networkx as nx

from .graphs import Graph, MultiGraph
from .models import GraphFormatError, InvalidGraphError

logger = logging.getLogger(__name__)

GRAPH6_HEADER = ">>graph6<<"
SPARSE6_HEADER = ">>sparse6<<"


# =============================================================================
# Record checks
# =============================================================================


def _six_bit_values(text: str, start: int) -> list[int]:
    """Decode bytes from ``start`` onwards into 6-bit values, checking range."""
    values = []
    for i in range(start, len(text)):
        code = ord(text[i])
        if not 63 <= code <= 126:
            raise GraphFormatError(f"byte {code!r} outside printable range 63..126", offset=i)
        values.append(code - 63)
    return values


def _decode_size(text: str) -> tuple[int, int]:
    """Return ``(n, offset of first data byte)``."""
    if not text:
        raise GraphFormatError("empty input", offset=0)
    values = _six_bit_values(text[: min(len(text), 8)], 0)
    if values[0] != 63:
        return values[0], 1
    if len(values) >= 2 and values[1] == 63:
        if len(values) < 8:
            raise GraphFormatError("truncated vertex count", offset=len(text))
        n = 0
        for v in values[2:8]:
            n = (n << 6) | v
        return n, 8
    if len(values) < 4:
        raise GraphFormatError("truncated vertex count", offset=len(text))
    n = (values[1] << 12) | (values[2] << 6) | values[3]
    return n, 4


def _strip_header(text: str, header: str) -> tuple[str, int]:
    if text.startswith(header):
        return text[len(header) :], len(header)
    return text, 0


def _shifted(e: GraphFormatError, shift: int) -> GraphFormatError:
    return GraphFormatError(e.message, offset=(e.offset or 0) + shift)


def _check_graph6(body: str, shift: int) -> None:
    """Length and padding of a graph6 body; offsets are relative to the record."""
    try:
        n, start = _decode_size(body)
        values = _six_bit_values(body, start)
    except GraphFormatError as e:
        raise _shifted(e, shift) from None

    nbits = n * (n - 1) // 2
    expected = (nbits + 5) // 6
    if len(values) < expected:
        raise GraphFormatError(
            f"truncated record: {len(values)} data bytes, {expected} needed",
            offset=shift + len(body),
        )
    if len(values) > expected:
        raise GraphFormatError("trailing garbage after record", offset=shift + start + expected)
    pad = expected * 6 - nbits
    if pad and values[-1] & ((1 << pad) - 1):
        raise GraphFormatError("nonzero padding bits", offset=shift + start + expected - 1)


def _check_sparse6(body: str, shift: int) -> None:
    if body.startswith(";"):
        raise GraphFormatError("incremental sparse6 records are not supported", offset=shift)
    if not body.startswith(":"):
        raise GraphFormatError("sparse6 record must start with ':'", offset=shift)
    try:
        _, start = _decode_size(body[1:])
    except GraphFormatError as e:
        raise _shifted(e, shift + 1) from None
    try:
        _six_bit_values(body, start + 1)
    except GraphFormatError as e:
        raise _shifted(e, shift) from None


def _decode(reader: Callable[[bytes], nx.Graph], body: str, shift: int) -> nx.Graph:
    try:
        return reader(body.encode("ascii"))
    except (nx.NetworkXError, ValueError) as e:
        raise GraphFormatError(str(e), offset=shift) from e


# =============================================================================
# graph6
# =============================================================================


def serialize_graph6(g: Graph) -> str:
    """Encode ``g`` as a graph6 record (no header, no newline)."""
    return nx.to_graph6_bytes(g.to_networkx(), header=False).decode("ascii").rstrip("\n")


def parse_graph6(text: str) -> Graph:
    """
    Decode one graph6 record.

    Raises:
        GraphFormatError: empty input, bytes outside 63..126, wrong length
            (truncated or trailing garbage) or nonzero padding bits. The
            error carries the byte offset of the problem.
    """
    body, shift = _strip_header(text.strip("\r\n"), GRAPH6_HEADER)
    if body.startswith(":"):
        raise GraphFormatError("sparse6 record where graph6 expected", offset=shift)
    _check_graph6(body, shift)
    return Graph.from_networkx(_decode(nx.from_graph6_bytes, body, shift))


# =============================================================================
# sparse6
# =============================================================================


def serialize_sparse6(mg: MultiGraph) -> str:
    """Encode ``mg`` as a sparse6 record, parallel edges included."""
    return nx.to_sparse6_bytes(mg.to_networkx(), header=False).decode("ascii").rstrip("\n")


def parse_sparse6(text: str) -> MultiGraph:
    """
    Decode one sparse6 record into a multigraph.

    Edge ids follow the record's edge order (by larger end, then smaller).

    Raises:
        GraphFormatError: malformed record, out-of-range bytes, incremental
            records, or a loop ("loops unsupported").
    """
    body, shift = _strip_header(text.strip("\r\n"), SPARSE6_HEADER)
    _check_sparse6(body, shift)
    decoded = _decode(nx.from_sparse6_bytes, body, shift)
    loops = list(nx.nodes_with_selfloops(decoded))
    if loops:
        raise GraphFormatError(f"loops unsupported (vertex {loops[0]})", offset=shift)
    edges = sorted((max(u, v), min(u, v)) for u, v in decoded.edges())
    return MultiGraph.from_edges(decoded.number_of_nodes(), ((u, v) for v, u in edges))


# =============================================================================
# Record files
# =============================================================================


def parse_record(text: str) -> Graph | MultiGraph:
    """Decode a record, choosing sparse6 when it starts with ``:``."""
    body = text.removeprefix(GRAPH6_HEADER).removeprefix(SPARSE6_HEADER)
    if body.startswith((":", ";")):
        return parse_sparse6(body)
    return parse_graph6(body)


def parse_simple_record(text: str) -> Graph:
    """Decode a record that must describe a simple graph."""
    parsed = parse_record(text)
    if isinstance(parsed, Graph):
        return parsed
    try:
        return Graph.from_edges(parsed.n, parsed.edges)
    except InvalidGraphError as e:
        raise GraphFormatError(f"record is not a simple graph: {e}") from e


def as_multigraph(record: Graph | MultiGraph) -> MultiGraph:
    return record if isinstance(record, MultiGraph) else MultiGraph.from_graph(record)


@dataclass
class Record:
    """One decoded line of a graph file."""

    index: int
    text: str
    graph: Graph | MultiGraph


def iter_records(text: str) -> Iterator[Record]:
    """
    Decode every record of a newline-delimited graph file.

    Blank lines are skipped. Errors are re-raised with the record index and
    the byte offset within the file.
    """
    offset = 0
    index = 0
    for line in text.splitlines(keepends=True):
        stripped = line.strip()
        line_offset = offset
        offset += len(line)
        if not stripped:
            continue
        try:
            graph = parse_record(stripped)
        except GraphFormatError as e:
            raise GraphFormatError(
                e.message, offset=line_offset + (e.offset or 0), record=index
            ) from None
        except InvalidGraphError as e:
            raise GraphFormatError(str(e), offset=line_offset, record=index) from None
        body = stripped.removeprefix(GRAPH6_HEADER).removeprefix(SPARSE6_HEADER)
        yield Record(index=index, text=body, graph=graph)
        index += 1


def read_records(path: Path) -> list[Record]:
    logger.debug(f"Reading graph records from {path}")
    return list(iter_records(path.read_text(encoding="ascii", errors="surrogateescape")))


def write_records(path: Path, graphs: list[Graph | MultiGraph]) -> None:
    lines = [
        serialize_sparse6(g) if isinstance(g, MultiGraph) else serialize_graph6(g) for g in graphs
    ]
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("".join(line + "\n" for line in lines), encoding="ascii")


def encode(g: Graph | MultiGraph) -> dict[str, str]:
    """Self-describing encoding used inside JSON reports."""
    if isinstance(g, MultiGraph):
        return {"sparse6": serialize_sparse6(g)}
    return {"graph6": serialize_graph6(g)}


def file_sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()
