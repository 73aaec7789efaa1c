"""
Tests for run storage handlers.
"""

import json

import numpy as np
import pytest

from ambulatogram import Ambulatogram, PresenceInterval
from artifact_filter import FilterConfig, judge
from data_store import (
    AmbulatogramStorage,
    DetectionStorage,
    IntervalStorage,
    ManifestStorage,
    RunStorage,
    VerdictStorage,
)
from ingestion import Detection, MalformedRecordError, TrackSequence

pytestmark = [pytest.mark.unit]


@pytest.fixture
def detections():
    return [Detection("kinect1", 1, 0.1 * k, (1.0 + 0.01 * k, 2.0, 0.9)) for k in range(5)]


class TestDetectionStorage:
    """Test cases for the JSONL detection stream."""

    def test_save_one_object_per_line(self, detections, tmp_path):
        """Each line is a compact JSON detection."""
        path = tmp_path / "run_01" / "detections.jsonl"
        DetectionStorage().save(detections, path)
        lines = path.read_text(encoding="utf-8").splitlines()
        assert len(lines) == 5
        assert lines[0] == '{"sensor":"kinect1","local_id":1,"stamp":0.0,"x":1.0,"y":2.0,"z":0.9}'

    def test_load_returns_saved_detections(self, detections, tmp_path):
        """Loading gives back the same detections."""
        path = tmp_path / "detections.jsonl"
        DetectionStorage().save(detections, path)
        log = DetectionStorage().load(path)
        assert log.detections == detections
        assert log.malformed == 0

    def test_malformed_lines_skipped(self, detections, tmp_path):
        """Bad lines are counted and skipped by default."""
        path = tmp_path / "detections.jsonl"
        DetectionStorage().save(detections[:2], path)
        with open(path, "a", encoding="utf-8") as f:
            f.write("{not json\n")
            f.write('{"sensor":"kinect1","local_id":1,"stamp":0.5}\n')
            f.write('{"sensor":"kinect1","local_id":-3,"stamp":0.5,"x":0,"y":0,"z":0}\n')
            f.write("\n")
            f.write("[1, 2, 3]\n")
        log = DetectionStorage().load(path)
        assert len(log.detections) == 2
        assert log.malformed == 4

    def test_strict_mode_raises_with_location(self, detections, tmp_path):
        """Strict loading names the file and line of the first bad record."""
        path = tmp_path / "detections.jsonl"
        DetectionStorage().save(detections[:2], path)
        with open(path, "a", encoding="utf-8") as f:
            f.write("{not json\n")
        with pytest.raises(MalformedRecordError, match=r"detections\.jsonl:3"):
            DetectionStorage(strict=True).load(path)

    def test_missing_file(self, tmp_path):
        """A missing stream is an error, not an empty run."""
        with pytest.raises(FileNotFoundError):
            DetectionStorage().load(tmp_path / "absent.jsonl")

    def test_empty_stream(self, tmp_path):
        """An empty file is a valid empty stream."""
        path = tmp_path / "detections.jsonl"
        DetectionStorage().save([], path)
        assert DetectionStorage().load(path).detections == []


class TestIntervalStorage:
    """Test cases for reference interval files."""

    def test_save_with_metadata(self, tmp_path):
        """Intervals are saved next to their metadata."""
        intervals = [
            PresenceInterval("resident", "kitchen", 0.0, 30.0, "cooking"),
            PresenceInterval("visitor", "dining-room", 10.0, 20.0),
        ]
        path = tmp_path / "intervals.json"
        IntervalStorage().save(intervals, path, metadata={"scenario": "shrunk-day"})
        data = json.loads(path.read_text(encoding="utf-8"))
        assert data["metadata"] == {"scenario": "shrunk-day", "total_intervals": 2}
        assert IntervalStorage().load(path) == intervals

    def test_load_plain_list(self, tmp_path):
        """A bare JSON list of intervals is accepted."""
        path = tmp_path / "intervals.json"
        path.write_text(json.dumps([{"person": "resident", "zone": "kitchen", "t_start": 0, "t_end": 5}]), encoding="utf-8")
        assert IntervalStorage().load(path) == [PresenceInterval("resident", "kitchen", 0.0, 5.0)]

    def test_missing_file(self, tmp_path):
        """Missing reference files are reported."""
        with pytest.raises(FileNotFoundError):
            IntervalStorage().load(tmp_path / "intervals.json")


class TestManifestStorage:
    """Test cases for run manifests."""

    def test_missing_manifest_is_empty(self, tmp_path):
        """A run without manifest starts from nothing."""
        assert ManifestStorage().load(tmp_path / "manifest.json") == {}

    def test_update_merges(self, tmp_path):
        """Later stages add keys without losing earlier ones."""
        path = tmp_path / "manifest.json"
        storage = ManifestStorage()
        storage.save({"seed": 42, "run": 1}, path)
        manifest = storage.update(path, bin_width=5.0)
        assert manifest == {"seed": 42, "run": 1, "bin_width": 5.0}
        assert storage.load(path) == manifest

    def test_keys_sorted(self, tmp_path):
        """Manifests are written with sorted keys."""
        path = tmp_path / "manifest.json"
        ManifestStorage().save({"seed": 1, "config_hash": "abc"}, path)
        text = path.read_text(encoding="utf-8")
        assert text.index("config_hash") < text.index("seed")


class TestVerdictStorage:
    """Test cases for filter verdict CSV."""

    def test_columns_and_values(self, tmp_path):
        """One row per verdict with formatted numbers."""
        stamps = 0.5 * np.arange(10)
        still = TrackSequence(("kinect1", 4), stamps, np.tile([0.4, 0.4, 0.9], (10, 1)))
        verdict = judge(still, FilterConfig())
        path = tmp_path / "verdicts.csv"
        VerdictStorage().save([verdict], path)
        text = path.read_text(encoding="utf-8")
        assert text.splitlines()[0] == "person_key,t_start,t_end,kept,reason,hull_perimeter_m,max_accel_mps2"
        rows = VerdictStorage().load(path)
        assert rows[0]["person_key"] == "kinect1/user4"
        assert rows[0]["t_end"] == "4.5"
        assert rows[0]["kept"] == "false"
        assert rows[0]["reason"] == "static-perimeter"
        assert rows[0]["hull_perimeter_m"] == "0"


class TestAmbulatogramStorage:
    """Test cases for ambulatogram CSV files."""

    def test_label_from_file_name(self, tmp_path):
        """The file stem becomes the label."""
        amb = Ambulatogram(5.0, 0.0, 15.0, ("kitchen", "office"), [[1, 0, 2], [0, 0, 1]])
        path = tmp_path / "ambulatogram_raw.csv"
        AmbulatogramStorage().save(amb, path)
        loaded = AmbulatogramStorage().load(path)
        assert loaded == amb
        assert loaded.label == "ambulatogram_raw"

    def test_missing_file(self, tmp_path):
        """Evaluating before running is an error."""
        with pytest.raises(FileNotFoundError):
            AmbulatogramStorage().load(tmp_path / "ambulatogram_raw.csv")


class TestRunStorage:
    """Test cases for the output layout."""

    def test_layout(self, tmp_path):
        """Runs live in zero-padded directories."""
        storage = RunStorage(tmp_path)
        assert storage.detections_path(3) == tmp_path / "run_03" / "detections.jsonl"
        assert storage.intervals_path(3).name == "intervals.json"
        assert storage.manifest_path(12).parent.name == "run_12"

    def test_run_dirs(self, tmp_path):
        """Only existing run directories are listed, in order."""
        storage = RunStorage(tmp_path / "output")
        assert storage.run_dirs() == []
        for name in ("run_02", "run_01", "notes"):
            (tmp_path / "output" / name).mkdir(parents=True)
        (tmp_path / "output" / "run_03.txt").write_text("", encoding="utf-8")
        assert [p.name for p in storage.run_dirs()] == ["run_01", "run_02"]

    def test_write_text(self, tmp_path):
        """Text files are written with LF endings."""
        storage = RunStorage(tmp_path)
        path = storage.write_text(tmp_path / "deep" / "evaluation.txt", "a\nb\n")
        assert path.read_bytes() == b"a\nb\n"
