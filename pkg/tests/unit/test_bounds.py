"""Tests for family bounds and host scans."""

from fractions import Fraction

import pytest

from snarkbound import bounds
from snarkbound.bounds import (
    BoundReport,
    ScanCriteria,
    family_oddness_bound,
    format_fraction,
    oddness_growth,
    parse_fraction,
    per_block_bound,
    scan_candidates,
    shortness_report,
)
from snarkbound.cycles import ConstrainedMaxima
from snarkbound.graphs import Graph
from snarkbound.models import InvalidGraphError, ScanJournal, SnarkboundError


def maxima(*values: int | None) -> ConstrainedMaxima:
    return ConstrainedMaxima((0, 1), *values)


class TestPerBlockBound:
    @pytest.mark.parametrize(
        ("values", "expected"),
        [
            ((19, 18, 19, 18), 17),
            ((26, 25, 26, 25), 24),
            ((9, 9, 9, 10), 8),
            ((4, 3, 4, None), 2),
            ((None, 7, None, None), 6),
        ],
    )
    def test_offsets(self, values, expected):
        assert per_block_bound(maxima(*values)) == expected

    def test_all_empty(self):
        with pytest.raises(InvalidGraphError, match="all four"):
            per_block_bound(maxima(None, None, None, None))


class TestFractions:
    def test_format(self):
        assert format_fraction(Fraction(34, 36)) == "17/18"
        assert format_fraction(Fraction(1)) == "1/1"

    def test_parse(self):
        assert parse_fraction("17/18") == Fraction(17, 18)
        assert parse_fraction(1) == Fraction(1)

    def test_floats_refused(self):
        with pytest.raises(ValueError, match="exact"):
            parse_fraction("0.94")


class TestFamilyOddness:
    @pytest.mark.parametrize(
        ("q", "frame", "expected"),
        [(0, 5, 0), (1, 3, 4), (1, 4, 4), (2, 3, 6)],
    )
    def test_rounded_up_to_even(self, q, frame, expected):
        assert family_oddness_bound(q, frame) == expected


class TestShortnessReport:
    def test_petersen(self, petersen):
        report = shortness_report(petersen, (0, 1), host="petersen")

        assert report.block_size == 8
        assert report.per_block == 8
        assert report.coefficient == 1
        assert report.q == 0
        assert report.oddness_growth == 0
        assert report.graph6 == "IheA@GUAo"

    def test_k4(self, k4):
        report = shortness_report(k4, (0, 1))

        assert report.maxima.as_tuple() == (4, 3, 4, None)
        assert report.coefficient == 1
        assert report.q == 0

    def test_dict_round_trip(self, petersen):
        report = shortness_report(petersen, (0, 1), host="petersen")
        data = report.to_dict()

        assert data["coefficient"] == "1/1"
        assert data["oddness_growth"] == "0/1"
        assert BoundReport.from_dict(data) == report

    def test_missing_q_is_none(self, petersen):
        report = shortness_report(petersen, (0, 1), factors=[])

        assert report.q is None
        assert report.to_dict()["q"] == "none"
        assert report.oddness_growth is None

    def test_oddness_growth(self, petersen):
        assert oddness_growth(petersen, (0, 1)) == 0


class TestScanCriteria:
    def test_from_json(self):
        criteria = ScanCriteria.from_json('{"max_coefficient": "17/18", "min_q": 1}')

        assert criteria.max_coefficient == Fraction(17, 18)
        assert criteria.min_q == 1
        assert criteria.to_dict() == {"max_coefficient": "17/18", "min_q": 1}

    def test_empty_accepts_everything(self, petersen):
        criteria = ScanCriteria.from_json("")
        assert criteria.accepts(shortness_report(petersen, (0, 1)))

    @pytest.mark.parametrize("text", ["{", '{"max_coefficient": 0.9}', "[1]"])
    def test_bad_criteria(self, text):
        with pytest.raises(SnarkboundError, match="bad scan criteria"):
            ScanCriteria.from_json(text)

    def test_accepts_q(self):
        criteria = ScanCriteria(min_q=1)

        assert criteria.accepts_q(2)
        assert not criteria.accepts_q(0)
        assert not criteria.accepts_q(None)


class TestScan:
    """Test scans over small host lists."""

    def test_empty_list(self):
        result = scan_candidates([], ScanCriteria())

        assert result.examined == 0
        assert result.to_dict() == {"examined": 0, "matches": [], "errors": []}

    def test_every_edge_examined(self, petersen, k4):
        result = scan_candidates([("petersen", petersen), ("k4", k4)], ScanCriteria())

        assert result.examined == 21
        assert len(result.reports) == 21
        assert [r.host for r in result.reports[:15]] == ["petersen"] * 15
        assert result.reports[0].edge == petersen.edges[0]

    def test_filters(self, petersen):
        assert scan_candidates([("p", petersen)], ScanCriteria(min_q=1)).reports == []
        strict = ScanCriteria(max_coefficient=Fraction(1, 2))
        assert scan_candidates([("p", petersen)], strict).reports == []

    def test_bad_host_is_collected(self, k4):
        triangle = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])

        result = scan_candidates([("triangle", triangle), ("k4", k4)], ScanCriteria())

        assert len(result.errors) == 1
        assert result.errors[0].startswith("triangle:")
        assert len(result.reports) == 6

    def test_journal_resume(self, tmp_path, petersen, k4):
        path = tmp_path / "scan.jsonl"
        hosts = [("petersen", petersen), ("k4", k4)]

        first = scan_candidates(hosts, ScanCriteria(), journal=path)
        lines = path.read_text().splitlines()
        second = scan_candidates(hosts, ScanCriteria(), journal=path)

        assert len(lines) == 21
        assert path.read_text().splitlines() == lines
        assert second.to_dict() == first.to_dict()

    def test_torn_journal_line_ignored(self, tmp_path, k4):
        path = tmp_path / "scan.jsonl"
        scan_candidates([("k4", k4)], ScanCriteria(), journal=path)
        with open(path, "a") as f:
            f.write('{"host_index": 0, "edge_')

        assert len(ScanJournal(path).load()) == 6

    def test_parallel_matches_serial(self, petersen, k4):
        hosts = [("petersen", petersen), ("k4", k4)]
        serial = scan_candidates(hosts, ScanCriteria())
        parallel = scan_candidates(hosts, ScanCriteria(), jobs=2)

        assert parallel.to_dict() == serial.to_dict()

    def test_interrupted_scan_keeps_finished_host(self, tmp_path, monkeypatch, petersen, k4, prism):
        path = tmp_path / "scan.jsonl"
        hosts = [("petersen", petersen), ("k4", k4), ("prism", prism)]
        real = bounds._scan_host

        def interrupt_second(job, on_edge=None):
            if job.index == 1:
                raise KeyboardInterrupt
            return real(job, on_edge)

        monkeypatch.setattr(bounds, "_scan_host", interrupt_second)
        with pytest.raises(KeyboardInterrupt):
            scan_candidates(hosts, ScanCriteria(), journal=path)

        done = ScanJournal(path).load()
        assert len(done) == 15
        assert {host for host, _ in done} == {0}

        monkeypatch.setattr(bounds, "_scan_host", real)
        resumed = scan_candidates(hosts, ScanCriteria(), journal=path)
        assert resumed.to_dict() == scan_candidates(hosts, ScanCriteria()).to_dict()

    def test_interrupted_host_keeps_finished_edges(self, tmp_path, monkeypatch, petersen):
        path = tmp_path / "scan.jsonl"
        real = bounds.shortness_report
        calls = []

        def interrupt_third(*args, **kwargs):
            calls.append(args[1])
            if len(calls) == 3:
                raise KeyboardInterrupt
            return real(*args, **kwargs)

        monkeypatch.setattr(bounds, "shortness_report", interrupt_third)
        with pytest.raises(KeyboardInterrupt):
            scan_candidates([("petersen", petersen)], ScanCriteria(), journal=path)

        assert sorted(ScanJournal(path).load()) == [(0, 0), (0, 1)]
