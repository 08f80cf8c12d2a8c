"""
Shared models for snarkbound: enums, errors, JSON reports and the scan journal.
"""

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone

UTC = timezone.utc
from enum import Enum
from pathlib import Path
from typing import Any, Final, Literal

SCHEMA_VERSION = "1.0.0"

INFINITE: Final = "infinite"
NONE: Final = "none"

Infinite = Literal["infinite"]


class SnarkClassification(str, Enum):
    """Colourability class of a connected cubic graph."""

    THREE_EDGE_COLORABLE = "three_edge_colorable"
    WEAK_SNARK = "weak_snark"
    SNARK = "snark"
    UNCOLORABLE = "uncolorable"  # not colourable, cyclic connectivity below 4


class LinkingPolicy(str, Enum):
    """How attachment slots of a block are matched to frame edges."""

    CANONICAL = "canonical"
    SEEDED = "seeded"


class SubgraphMode(str, Enum):
    """Which spanning eulerian subgraph of the frame the long cycle follows."""

    FULL = "full"  # the frame itself
    CYCLE = "cycle"  # a hamiltonian cycle of the frame


class SkipReason(str, Enum):
    """Why a report section was not computed."""

    CAP_EXCEEDED = "cap_exceeded"
    NOT_APPLICABLE = "not_applicable"


# =============================================================================
# Errors
# =============================================================================


class SnarkboundError(Exception):
    """Base class for all toolkit errors."""


class GraphFormatError(SnarkboundError):
    """A graph6/sparse6 record could not be decoded."""

    def __init__(self, message: str, offset: int | None = None, record: int | None = None):
        self.offset = offset
        self.record = record
        location = []
        if record is not None:
            location.append(f"record {record}")
        if offset is not None:
            location.append(f"byte {offset}")
        suffix = f" ({', '.join(location)})" if location else ""
        super().__init__(f"{message}{suffix}")
        self.message = message


class InvalidGraphError(SnarkboundError):
    """A graph violates a structural precondition."""


class NotCubicError(InvalidGraphError):
    """An operation requiring a cubic graph received something else."""


class EdgeNotFoundError(InvalidGraphError):
    """The named edge is not an edge of the graph."""


class SubstitutionError(SnarkboundError):
    """Inputs to a substitution are unusable."""


class ValidationFailure(SnarkboundError):
    """A substitution failed one of its validation clauses."""

    def __init__(self, clause: str, detail: str):
        self.clause = clause
        self.detail = detail
        super().__init__(f"{clause}: {detail}")


class NoTwoFactorError(SnarkboundError):
    """The graph has no 2-factor."""


class NoCompatibleTrailError(SnarkboundError):
    """No eulerian trail respects the allowed transitions."""


class FetchError(SnarkboundError):
    """A graph list could not be downloaded."""


class CapExceededError(SnarkboundError):
    """An exhaustive search was refused because the input exceeds its cap."""

    def __init__(self, what: str, n: int, cap: int):
        self.what = what
        self.n = n
        self.cap = cap
        super().__init__(f"{what} capped at {cap} vertices, graph has {n}")


# =============================================================================
# Reports
# =============================================================================


def skip_marker(reason: SkipReason, **details: Any) -> dict[str, Any]:
    """Placeholder for a report section that was deliberately not computed."""
    return {"skipped": reason.value, **details}


def sentinel(value: Any) -> Any:
    """Spell ``None`` as the "none" sentinel for JSON output."""
    return NONE if value is None else value


@dataclass
class InputDigest:
    """A file consumed by a command."""

    path: str
    sha256: str

    def to_dict(self) -> dict[str, Any]:
        return {"path": self.path, "sha256": self.sha256}


@dataclass
class Report:
    """
    Result of one CLI command.

    Reports are byte-stable for fixed inputs apart from the ``timing`` block.
    """

    command: str
    tool_version: str
    schema_version: str = SCHEMA_VERSION
    inputs: list[InputDigest] = field(default_factory=list)
    parameters: dict[str, Any] = field(default_factory=dict)
    results: list[dict[str, Any]] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)
    skipped: int = 0
    timing: dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.errors and self.skipped == 0

    @property
    def exit_code(self) -> int:
        if self.errors:
            return 1
        if self.skipped:
            return 2
        return 0

    def add_result(self, payload: dict[str, Any]) -> None:
        self.results.append(payload)
        self.skipped += _count_skips(payload)

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary for JSON serialization."""
        return {
            "schema_version": self.schema_version,
            "command": self.command,
            "tool_version": self.tool_version,
            "inputs": [i.to_dict() for i in self.inputs],
            "parameters": self.parameters,
            "results": self.results,
            "errors": self.errors,
            "ok": self.ok,
            "timing": self.timing,
        }

    def to_json(self) -> str:
        """Serialize with sorted keys so reports diff cleanly."""
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _count_skips(payload: Any) -> int:
    if isinstance(payload, dict):
        own = 1 if "skipped" in payload else 0
        return own + sum(_count_skips(v) for v in payload.values())
    if isinstance(payload, list):
        return sum(_count_skips(v) for v in payload)
    return 0


# =============================================================================
# Scan journal
# =============================================================================


@dataclass
class JournalEntry:
    """One completed (host, edge) unit of a scan."""

    host_index: int
    edge_index: int
    host_id: str
    payload: dict[str, Any] | None = None
    error: str | None = None
    ts: str = field(default_factory=lambda: datetime.now(UTC).isoformat())

    def to_dict(self) -> dict[str, Any]:
        result: dict[str, Any] = {
            "host_index": self.host_index,
            "edge_index": self.edge_index,
            "host_id": self.host_id,
            "ts": self.ts,
        }
        if self.payload is not None:
            result["payload"] = self.payload
        if self.error is not None:
            result["error"] = self.error
        return result

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "JournalEntry":
        return cls(
            host_index=data["host_index"],
            edge_index=data["edge_index"],
            host_id=data["host_id"],
            payload=data.get("payload"),
            error=data.get("error"),
            ts=data.get("ts", ""),
        )


class ScanJournal:
    """Append-only line-delimited JSON log of finished scan units."""

    def __init__(self, path: Path):
        self.path = path

    def load(self) -> dict[tuple[int, int], JournalEntry]:
        """Read completed units; a torn final line is ignored."""
        done: dict[tuple[int, int], JournalEntry] = {}
        if not self.path.exists():
            return done
        with open(self.path) as f:
            for line in f:
                line = line.strip()
                if not line:
                    continue
                try:
                    entry = JournalEntry.from_dict(json.loads(line))
                except (json.JSONDecodeError, KeyError):
                    continue
                done[(entry.host_index, entry.edge_index)] = entry
        return done

    def append(self, entry: JournalEntry) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "a") as f:
            f.write(json.dumps(entry.to_dict(), sort_keys=True) + "\n")
