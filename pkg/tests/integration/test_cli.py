"""End-to-end tests of the command line through ``main``."""

import json
from pathlib import Path
from unittest.mock import AsyncMock, MagicMock, patch

import pytest

from snarkbound.formats import write_records
from snarkbound.run import main


def run_cli(tmp_path: Path, *argv: str) -> tuple[int, dict]:
    """Run one verb with the report written to a file; return exit code and report."""
    out = tmp_path / "report.json"
    code = main([*argv, "--json", str(out), "--config", str(tmp_path / "none.yaml")])
    return code, json.loads(out.read_text())


class TestAnalyze:
    def test_petersen(self, tmp_path):
        code, report = run_cli(tmp_path, "analyze", "fixture:petersen")
        result = report["results"][0]

        assert code == 0
        assert report["ok"] is True
        assert report["command"] == "analyze"
        assert result["structure"]["classification"] == "snark"
        assert result["structure"]["cyclic_edge_connectivity"] == 5
        assert result["circumference"]["circumference"] == 9
        assert result["oddness"]["oddness"] == 2
        assert result["cycle_census"]["total"] == 57

    def test_k4(self, tmp_path):
        code, report = run_cli(tmp_path, "analyze", "fixture:k4")
        structure = report["results"][0]["structure"]

        assert code == 0
        assert structure["classification"] == "three_edge_colorable"
        assert structure["cyclic_edge_connectivity"] == "infinite"

    def test_group_gives_one_result_per_graph(self, tmp_path):
        code, report = run_cli(tmp_path, "analyze", "fixture:small")

        assert code == 0
        assert [r["graph"] for r in report["results"]] == [
            "k4",
            "k33",
            "petersen",
            "prism",
            "mobius8",
        ]

    def test_corrupt_file(self, tmp_path):
        """Should name the record and byte offset of the damage."""
        bad = tmp_path / "bad.g6"
        bad.write_text("C~\nC\n")

        code, report = run_cli(tmp_path, "analyze", str(bad))

        assert code == 1
        assert report["ok"] is False
        assert "record 1" in report["errors"][0]
        assert "byte 4" in report["errors"][0]

    def test_inputs_are_digested(self, tmp_path, petersen):
        path = tmp_path / "p.g6"
        write_records(path, [petersen])

        _, report = run_cli(tmp_path, "circ", str(path))

        assert report["inputs"][0]["path"] == str(path)
        assert len(report["inputs"][0]["sha256"]) == 64


class TestCapsAndSkips:
    def test_capped_circumference_exits_two(self, tmp_path):
        code, report = run_cli(tmp_path, "circ", "fixture:petersen", "--cap-circ", "8")

        assert code == 2
        assert report["results"][0]["circumference"]["skipped"] == "cap_exceeded"

    def test_config_file_caps(self, tmp_path):
        config = tmp_path / "snarkbound.yaml"
        config.write_text("snarkbound:\n  caps:\n    oddness: 6\n")
        out = tmp_path / "r.json"

        code = main(["oddness", "fixture:petersen", "--config", str(config), "--json", str(out)])

        assert code == 2
        report = json.loads(out.read_text())
        assert report["parameters"]["config"]["caps"]["oddness"] == 6


class TestBound:
    def test_petersen_edge(self, tmp_path):
        code, report = run_cli(
            tmp_path, "bound", "fixture:petersen", "--edge", "0,1", "--frame-size", "3"
        )
        result = report["results"][0]

        assert code == 0
        assert result["coefficient"] == "1/1"
        assert result["q"] == 0
        assert result["family"] == {
            "frame_size": 3,
            "vertices": 24,
            "circumference_at_most": 24,
            "oddness_at_least": 0,
        }

    def test_missing_edge(self, tmp_path):
        code, report = run_cli(tmp_path, "bound", "fixture:petersen", "--edge", "0,2")

        assert code == 1
        assert report["errors"] == ["(0, 2) is not an edge of the graph"]

    def test_malformed_edge_is_usage_error(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["bound", "fixture:petersen", "--edge", "0"])
        assert exc.value.code == 2


class TestConstructAndLongCycle:
    """Test the construct -> longcycle round trip through files."""

    def test_petersen_into_two_vertex_frame(self, tmp_path):
        graph_path = tmp_path / "out" / "g16.g6"

        code, built = run_cli(
            tmp_path, "construct", "fixture:petersen", "fixture:f2", str(graph_path),
            "--edge", "0,1",
        )

        assert code == 0
        assert built["results"][0]["n"] == 16
        assert built["results"][0]["validation"]["passed"] is True
        assert graph_path.exists()
        assert (tmp_path / "out" / "g16.g6.blockmap.json").exists()

        code, report = run_cli(tmp_path, "longcycle", str(graph_path), "fixture:f2", "--exact")
        result = report["results"][0]

        assert code == 0
        assert result["within_exact"] is True
        assert result["length"] <= result["exact_circumference"]
        assert sorted(result["per_block_paths"]) == ["0", "1"]
        assert len(report["inputs"]) == 3

    def test_k4_host_rejected(self, tmp_path):
        graph_path = tmp_path / "k4.g6"

        code, report = run_cli(
            tmp_path, "construct", "fixture:k4", "fixture:f2", str(graph_path), "--edge", "0,1"
        )

        assert code == 1
        assert "not distinct" in report["errors"][0]
        assert not graph_path.exists()

    def test_fixture_graph_needs_blockmap(self, tmp_path):
        code, report = run_cli(tmp_path, "longcycle", "fixture:petersen", "fixture:f2")

        assert code == 1
        assert "--blockmap" in report["errors"][0]


class TestSurveysAndScans:
    def test_dominate_mobius(self, tmp_path):
        code, report = run_cli(tmp_path, "dominate", "fixture:mobius8", "--matching-size", "4")

        assert code == 0
        assert report["results"][0]["failing_count"] > 0

    def test_scan_small_graphs(self, tmp_path):
        journal = tmp_path / "scan.jsonl"

        code, report = run_cli(
            tmp_path, "scan", "fixture:small", "--criteria", '{"min_q": 1}',
            "--journal", str(journal),
        )
        result = report["results"][0]

        assert code == 0
        assert result["examined"] == 51
        assert result["matches"] == []
        assert report["parameters"]["criteria"] == {"max_coefficient": None, "min_q": 1}
        assert len(journal.read_text().splitlines()) == 51

    def test_bad_criteria(self, tmp_path):
        code, report = run_cli(tmp_path, "scan", "fixture:k4", "--criteria", "{")

        assert code == 1
        assert report["errors"][0].startswith("bad scan criteria")


class TestCorpusVerbs:
    def test_fixtures_written(self, tmp_path):
        dest = tmp_path / "corpus"

        code, report = run_cli(tmp_path, "fixtures", str(dest), "--group", "small")

        assert code == 0
        assert len(report["results"][0]["fixtures"]) == 5
        assert (dest / "index.json").exists()

    def test_fetch(self, tmp_path):
        response = MagicMock()
        response.content = b"C~\nIheA@GUAo\n"
        response.raise_for_status = MagicMock()
        dest = tmp_path / "lists" / "tiny.g6"

        with patch("httpx.AsyncClient") as MockClient:
            mock_client = AsyncMock()
            mock_client.get.return_value = response
            mock_client.__aenter__.return_value = mock_client
            mock_client.__aexit__.return_value = None
            MockClient.return_value = mock_client

            code, report = run_cli(
                tmp_path, "fetch", "https://example.org/tiny.g6", "--out", str(dest)
            )

        assert code == 0
        assert report["results"][0]["records"] == 2
        assert dest.exists()

    def test_version(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["--version"])

        assert exc.value.code == 0
        assert "snarkbound" in capsys.readouterr().out
