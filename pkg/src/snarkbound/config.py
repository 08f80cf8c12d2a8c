"""
Configuration for snarkbound.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import yaml

from .models import LinkingPolicy, SubgraphMode

DEFAULT_CONFIG_PATH = Path("snarkbound.yaml")


@dataclass
class CapsConfig:
    """Largest inputs the exhaustive searches accept."""

    circumference: int = 60
    oddness: int = 40
    enumeration: int = 30  # full cycle census


@dataclass
class StagesConfig:
    """Enable/disable individual analysis stages."""

    structure: bool = True
    circumference: bool = True
    oddness: bool = True
    cycle_census: bool = True


@dataclass
class SearchConfig:
    jobs: int = 1
    block_cutoff: int = 26  # exhaustive block paths up to this many vertices


@dataclass
class SubstitutionConfig:
    policy: LinkingPolicy = LinkingPolicy.CANONICAL
    seed: int = 0
    mode: SubgraphMode = SubgraphMode.FULL
    check_cyclic: bool = True


@dataclass
class ScanConfig:
    journal: Path | None = None
    max_coefficient: str | None = None  # e.g. "17/18"
    min_q: int | None = None


@dataclass
class FetchConfig:
    timeout_seconds: float = 60.0
    dest_dir: Path = field(default_factory=lambda: Path("data"))


@dataclass
class ToolConfig:
    """Complete snarkbound configuration."""

    caps: CapsConfig = field(default_factory=CapsConfig)
    stages: StagesConfig = field(default_factory=StagesConfig)
    search: SearchConfig = field(default_factory=SearchConfig)
    substitution: SubstitutionConfig = field(default_factory=SubstitutionConfig)
    scan: ScanConfig = field(default_factory=ScanConfig)
    fetch: FetchConfig = field(default_factory=FetchConfig)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ToolConfig":
        """Create config from a dictionary (e.g., from YAML)."""
        config = cls()

        if "caps" in data:
            caps = data["caps"]
            config.caps = CapsConfig(
                circumference=caps.get("circumference", 60),
                oddness=caps.get("oddness", 40),
                enumeration=caps.get("enumeration", 30),
            )

        if "stages" in data:
            stages = data["stages"]
            config.stages = StagesConfig(
                structure=stages.get("structure", True),
                circumference=stages.get("circumference", True),
                oddness=stages.get("oddness", True),
                cycle_census=stages.get("cycle_census", True),
            )

        if "search" in data:
            search = data["search"]
            config.search = SearchConfig(
                jobs=search.get("jobs", 1),
                block_cutoff=search.get("block_cutoff", 26),
            )

        if "substitution" in data:
            sub = data["substitution"]
            config.substitution = SubstitutionConfig(
                policy=LinkingPolicy(sub.get("policy", "canonical")),
                seed=sub.get("seed", 0),
                mode=SubgraphMode(sub.get("mode", "full")),
                check_cyclic=sub.get("check_cyclic", True),
            )

        if "scan" in data:
            scan = data["scan"]
            journal = scan.get("journal")
            config.scan = ScanConfig(
                journal=Path(journal) if journal else None,
                max_coefficient=scan.get("max_coefficient"),
                min_q=scan.get("min_q"),
            )

        if "fetch" in data:
            fetch = data["fetch"]
            config.fetch = FetchConfig(
                timeout_seconds=fetch.get("timeout_seconds", 60.0),
                dest_dir=Path(fetch.get("dest_dir", "data")),
            )

        return config

    @classmethod
    def from_yaml(cls, path: Path) -> "ToolConfig":
        """Load config from a YAML file; a missing file gives the defaults."""
        if not path.exists():
            return cls()

        with open(path) as f:
            data = yaml.safe_load(f) or {}

        return cls.from_dict(data.get("snarkbound", {}) or {})

    def to_dict(self) -> dict[str, Any]:
        """Convert config to dictionary for JSON serialization."""
        return {
            "caps": {
                "circumference": self.caps.circumference,
                "oddness": self.caps.oddness,
                "enumeration": self.caps.enumeration,
            },
            "stages": {
                "structure": self.stages.structure,
                "circumference": self.stages.circumference,
                "oddness": self.stages.oddness,
                "cycle_census": self.stages.cycle_census,
            },
            "search": {
                "jobs": self.search.jobs,
                "block_cutoff": self.search.block_cutoff,
            },
            "substitution": {
                "policy": self.substitution.policy.value,
                "seed": self.substitution.seed,
                "mode": self.substitution.mode.value,
                "check_cyclic": self.substitution.check_cyclic,
            },
            "scan": {
                "journal": str(self.scan.journal) if self.scan.journal else None,
                "max_coefficient": self.scan.max_coefficient,
                "min_q": self.scan.min_q,
            },
            "fetch": {
                "timeout_seconds": self.fetch.timeout_seconds,
                "dest_dir": str(self.fetch.dest_dir),
            },
        }
