"""
Analysis pipeline behind the ``analyze`` command.

Each stage adds one block of invariants to the report of a graph. Stages
whose exhaustive search would exceed the configured vertex cap return a
skip marker instead of running.
"""

import logging
from abc import ABC, abstractmethod
from collections import Counter
from dataclasses import dataclass
from typing import Any

from .config import ToolConfig
from .cycles import circumference, enumerate_cycles
from .factors import count_perfect_matchings, oddness
from .formats import encode
from .graphs import Graph, is_cubic
from .models import SkipReason, SnarkboundError, skip_marker
from .structure import classify, girth

logger = logging.getLogger(__name__)


@dataclass
class StageResult:
    """Result from a pipeline stage."""

    success: bool
    message: str | None = None
    data: dict[str, Any] | None = None


class PipelineStage(ABC):
    """Base class for pipeline stages."""

    name: str = "base"

    def __init__(self, config: ToolConfig):
        self.config = config

    @abstractmethod
    def process(self, g: Graph) -> StageResult:
        """Compute this stage's block for ``g``."""

    def is_enabled(self) -> bool:
        return True

    def skipped(self, reason: SkipReason, **details: Any) -> StageResult:
        return StageResult(success=True, message=f"{self.name} skipped",
                           data=skip_marker(reason, **details))

    def capped(self, g: Graph, cap: int) -> StageResult | None:
        if g.n > cap:
            logger.info(f"{self.name}: {g.n} vertices exceeds cap {cap}, skipping")
            return self.skipped(SkipReason.CAP_EXCEEDED, n=g.n, cap=cap)
        return None


class StructureStage(PipelineStage):
    """Girth always; classification and cyclic connectivity for connected cubic graphs."""

    name = "structure"

    def is_enabled(self) -> bool:
        return self.config.stages.structure

    def process(self, g: Graph) -> StageResult:
        if not (is_cubic(g) and g.is_connected()):
            return StageResult(
                success=True,
                message="not a connected cubic graph",
                data={"girth": girth(g), "cubic": is_cubic(g), "connected": g.is_connected()},
            )
        result = classify(g)
        return StageResult(success=True, message=result.classification.value,
                           data={"cubic": True, "connected": True, **result.to_dict()})


class CircumferenceStage(PipelineStage):
    name = "circumference"

    def is_enabled(self) -> bool:
        return self.config.stages.circumference

    def process(self, g: Graph) -> StageResult:
        if (skip := self.capped(g, self.config.caps.circumference)) is not None:
            return skip
        length, cycle = circumference(g, jobs=self.config.search.jobs)
        return StageResult(success=True, message=f"circumference {length}",
                           data={"circumference": length, "cycle": cycle.to_list()})


class OddnessStage(PipelineStage):
    name = "oddness"

    def is_enabled(self) -> bool:
        return self.config.stages.oddness

    def process(self, g: Graph) -> StageResult:
        if not is_cubic(g):
            return self.skipped(SkipReason.NOT_APPLICABLE, why="oddness needs a cubic graph")
        if (skip := self.capped(g, self.config.caps.oddness)) is not None:
            return skip
        report = oddness(g, jobs=self.config.search.jobs)
        data = report.to_dict()
        data["two_factor_count"] = count_perfect_matchings(g)
        return StageResult(success=True, message=f"oddness {report.oddness}", data=data)


class CycleCensusStage(PipelineStage):
    """Number of cycles of each length, by full enumeration."""

    name = "cycle_census"

    def is_enabled(self) -> bool:
        return self.config.stages.cycle_census

    def process(self, g: Graph) -> StageResult:
        if (skip := self.capped(g, self.config.caps.enumeration)) is not None:
            return skip
        counts = Counter(len(c) for c in enumerate_cycles(g))
        return StageResult(
            success=True,
            message=f"{sum(counts.values())} cycles",
            data={
                "total": sum(counts.values()),
                "by_length": {str(k): counts[k] for k in sorted(counts)},
            },
        )


class AnalysisPipeline:
    """Runs the enabled stages in order over one graph."""

    def __init__(self, config: ToolConfig):
        self.config = config
        self.stages: list[PipelineStage] = [
            StructureStage(config),
            CircumferenceStage(config),
            OddnessStage(config),
            CycleCensusStage(config),
        ]

    def run(self, name: str, g: Graph) -> tuple[dict[str, Any], list[str]]:
        """Report payload for ``g`` and the stage errors met on the way."""
        payload: dict[str, Any] = {"graph": name, "n": g.n, "m": g.m, **encode(g)}
        errors: list[str] = []
        for stage in self.stages:
            if not stage.is_enabled():
                continue
            logger.debug(f"Running stage {stage.name} on {name}")
            try:
                result = stage.process(g)
            except SnarkboundError as e:
                logger.warning(f"Stage {stage.name} failed on {name}: {e}")
                result = StageResult(success=False, message=f"{stage.name} failed: {e}")
            if result.success:
                payload[stage.name] = result.data
            else:
                errors.append(f"{name}: {result.message}")
                payload[stage.name] = {"error": result.message}
        return payload, errors
