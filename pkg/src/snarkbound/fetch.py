"""
Download of public graph6/sparse6 snark lists.

Every record is parsed before anything is written, so a saved list is
always readable by the rest of the tool. A provenance file next to the list
records where it came from.
"""

import gzip
import hashlib
import json
import logging
from dataclasses import dataclass, field
from datetime import datetime, timezone

UTC = timezone.utc
from pathlib import Path
from typing import Any

import httpx

from .formats import iter_records
from .models import SCHEMA_VERSION, FetchError, GraphFormatError

logger = logging.getLogger(__name__)

GZIP_MAGIC = b"\x1f\x8b"
PROVENANCE_SUFFIX = ".provenance.json"


@dataclass
class Provenance:
    """Where a saved graph list came from."""

    url: str
    sha256: str
    records: int
    path: str
    compressed: bool = False
    schema_version: str = SCHEMA_VERSION
    fetched_utc: str = field(default_factory=lambda: datetime.now(UTC).isoformat())

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema_version": self.schema_version,
            "url": self.url,
            "sha256": self.sha256,
            "records": self.records,
            "path": self.path,
            "compressed": self.compressed,
            "fetched_utc": self.fetched_utc,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def decode_payload(data: bytes) -> tuple[str, bool]:
    """Text of a downloaded list, gunzipped when it carries the gzip magic."""
    compressed = data[:2] == GZIP_MAGIC
    if compressed:
        try:
            data = gzip.decompress(data)
        except (OSError, EOFError) as e:
            raise FetchError(f"corrupt gzip payload: {e}") from e
    try:
        return data.decode("ascii"), compressed
    except UnicodeDecodeError as e:
        raise FetchError(f"graph list is not ASCII at byte {e.start}") from e


class GraphListClient:
    """Fetches graph lists over HTTP."""

    def __init__(self, timeout_seconds: float = 60.0):
        self.timeout = timeout_seconds

    async def download(self, url: str) -> bytes:
        logger.info(f"Downloading graph list from {url}")
        async with httpx.AsyncClient(timeout=self.timeout) as client:
            try:
                response = await client.get(url, follow_redirects=True)
                response.raise_for_status()
                return response.content
            except httpx.HTTPStatusError as e:
                logger.warning(f"HTTP error downloading {url}: {e}")
                raise FetchError(f"HTTP error downloading {url}: {e}") from e
            except httpx.HTTPError as e:
                logger.exception(f"Error downloading {url}")
                raise FetchError(f"error downloading {url}: {e}") from e

    async def fetch_list(self, url: str, dest: Path) -> Provenance:
        """
        Download, validate and save a list; write its provenance beside it.

        Raises:
            FetchError: on transport failures or a malformed payload.
        """
        data = await self.download(url)
        text, compressed = decode_payload(data)
        try:
            count = sum(1 for _ in iter_records(text))
        except GraphFormatError as e:
            raise FetchError(f"downloaded list is malformed: {e}") from e

        dest.parent.mkdir(parents=True, exist_ok=True)
        dest.write_text(text, encoding="ascii")
        provenance = Provenance(
            url=url,
            sha256=hashlib.sha256(text.encode("ascii")).hexdigest(),
            records=count,
            path=str(dest),
            compressed=compressed,
        )
        provenance_path(dest).write_text(provenance.to_json() + "\n")
        logger.info(f"Saved {count} graph(s) to {dest}")
        return provenance


def provenance_path(dest: Path) -> Path:
    return dest.with_name(dest.name + PROVENANCE_SUFFIX)
