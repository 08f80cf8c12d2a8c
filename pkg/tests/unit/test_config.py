"""Tests for configuration loading."""

from pathlib import Path

from snarkbound.config import ToolConfig
from snarkbound.models import LinkingPolicy, SubgraphMode


class TestToolConfig:
    """Test ToolConfig dataclass."""

    def test_defaults(self):
        """Should have sensible defaults."""
        config = ToolConfig()

        assert config.caps.circumference == 60
        assert config.caps.enumeration == 30
        assert config.search.jobs == 1
        assert config.substitution.policy == LinkingPolicy.CANONICAL
        assert config.scan.journal is None

    def test_from_dict_partial(self):
        """Should fill unspecified keys from the defaults."""
        config = ToolConfig.from_dict(
            {
                "caps": {"oddness": 24},
                "substitution": {"policy": "seeded", "mode": "cycle"},
                "scan": {"journal": "scan.jsonl", "min_q": 1},
            }
        )

        assert config.caps.oddness == 24
        assert config.caps.circumference == 60
        assert config.substitution.policy == LinkingPolicy.SEEDED
        assert config.substitution.mode == SubgraphMode.CYCLE
        assert config.scan.journal == Path("scan.jsonl")
        assert config.scan.min_q == 1

    def test_to_dict_round_trip(self):
        config = ToolConfig.from_dict({"stages": {"cycle_census": False}, "search": {"jobs": 4}})
        assert ToolConfig.from_dict(config.to_dict()) == config

    def test_missing_yaml_gives_defaults(self, tmp_path):
        assert ToolConfig.from_yaml(tmp_path / "absent.yaml") == ToolConfig()

    def test_from_yaml(self, tmp_path):
        path = tmp_path / "snarkbound.yaml"
        path.write_text(
            "snarkbound:\n"
            "  caps:\n"
            "    circumference: 40\n"
            "  fetch:\n"
            "    dest_dir: lists\n"
        )

        config = ToolConfig.from_yaml(path)

        assert config.caps.circumference == 40
        assert config.fetch.dest_dir == Path("lists")

    def test_empty_yaml(self, tmp_path):
        path = tmp_path / "snarkbound.yaml"
        path.write_text("")
        assert ToolConfig.from_yaml(path) == ToolConfig()

    def test_shipped_config_matches_defaults(self):
        """The bundled snarkbound.yaml spells out the defaults."""
        shipped = Path(__file__).parents[2] / "snarkbound.yaml"
        assert ToolConfig.from_yaml(shipped) == ToolConfig()
