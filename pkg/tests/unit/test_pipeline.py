"""Tests for the analysis pipeline."""

from snarkbound.config import CapsConfig, StagesConfig, ToolConfig
from snarkbound.graphs import Graph
from snarkbound.pipeline import (
    AnalysisPipeline,
    CircumferenceStage,
    CycleCensusStage,
    OddnessStage,
    StructureStage,
)


class TestStages:
    def test_structure_on_petersen(self, petersen):
        result = StructureStage(ToolConfig()).process(petersen)

        assert result.success
        assert result.message == "snark"
        assert result.data is not None
        assert result.data["girth"] == 5

    def test_structure_on_non_cubic(self):
        path = Graph.from_edges(3, [(0, 1), (1, 2)])
        result = StructureStage(ToolConfig()).process(path)

        assert result.data == {"girth": "infinite", "cubic": False, "connected": True}

    def test_circumference_capped(self, petersen):
        config = ToolConfig(caps=CapsConfig(circumference=8))
        result = CircumferenceStage(config).process(petersen)

        assert result.data == {"skipped": "cap_exceeded", "n": 10, "cap": 8}

    def test_oddness_not_applicable(self):
        path = Graph.from_edges(3, [(0, 1), (1, 2)])
        result = OddnessStage(ToolConfig()).process(path)

        assert result.data is not None
        assert result.data["skipped"] == "not_applicable"

    def test_oddness_counts_two_factors(self, petersen):
        result = OddnessStage(ToolConfig()).process(petersen)

        assert result.data is not None
        assert result.data["oddness"] == 2
        assert result.data["two_factor_count"] == 6

    def test_cycle_census(self, petersen):
        result = CycleCensusStage(ToolConfig()).process(petersen)

        assert result.data == {"total": 57, "by_length": {"5": 12, "6": 10, "8": 15, "9": 20}}


class TestAnalysisPipeline:
    """Test the full stage sequence."""

    def test_petersen_payload(self, petersen):
        payload, errors = AnalysisPipeline(ToolConfig()).run("petersen", petersen)

        assert errors == []
        assert payload["graph6"] == "IheA@GUAo"
        assert payload["circumference"]["circumference"] == 9
        assert payload["oddness"]["oddness"] == 2
        assert payload["structure"]["classification"] == "snark"

    def test_disabled_stage_omitted(self, k4):
        config = ToolConfig(stages=StagesConfig(cycle_census=False, oddness=False))
        payload, _ = AnalysisPipeline(config).run("k4", k4)

        assert "cycle_census" not in payload
        assert "oddness" not in payload
        assert payload["circumference"]["circumference"] == 4

    def test_stage_error_collected(self):
        """A forest has no cycle, so the circumference stage fails but the run goes on."""
        forest = Graph.from_edges(3, [(0, 1), (1, 2)])
        payload, errors = AnalysisPipeline(ToolConfig()).run("path", forest)

        assert errors == ["path: circumference failed: graph has no cycle"]
        assert payload["circumference"] == {"error": "circumference failed: graph has no cycle"}
        assert payload["cycle_census"] == {"total": 0, "by_length": {}}
