"""
Storage handlers for detection streams, presence intervals, verdicts and
run manifests.
"""

import csv
import json
from abc import ABC, abstractmethod
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from loguru import logger

from ambulatogram import Ambulatogram, PresenceInterval, ambulatogram_csv, format_number, parse_ambulatogram_csv
from artifact_filter import FilterVerdict
from ingestion import Detection, MalformedRecordError


class RecordStorage(ABC):
    """Abstract base class for file storage."""

    @abstractmethod
    def save(self, records: Any, filepath: Path) -> None:
        """Save records to a file."""
        pass

    @abstractmethod
    def load(self, filepath: Path) -> Any:
        """Load records from a file."""
        pass

    def ensure_directory(self, filepath: Path) -> None:
        """Ensure the directory for the file exists."""
        filepath.parent.mkdir(parents=True, exist_ok=True)


@dataclass
class DetectionLog:
    detections: List[Detection]
    malformed: int = 0


class DetectionStorage(RecordStorage):
    """Line-delimited JSON, one detection per line."""

    def __init__(self, strict: bool = False):
        self.strict = strict

    def save(self, records: Sequence[Detection], filepath: Path) -> None:
        self.ensure_directory(filepath)
        with open(filepath, "w", encoding="utf-8", newline="\n") as f:
            for det in records:
                f.write(json.dumps(det.to_record(), separators=(",", ":")))
                f.write("\n")
        logger.info(f"Saved {len(records)} detections to {filepath}")

    def load(self, filepath: Path) -> DetectionLog:
        """Parse a stream; malformed lines are skipped and counted unless ``strict``."""
        if not filepath.exists():
            raise FileNotFoundError(f"Detection stream not found: {filepath}")
        log = DetectionLog(detections=[])
        with open(filepath, "r", encoding="utf-8") as f:
            for line_number, line in enumerate(f, 1):
                if not line.strip():
                    continue
                try:
                    log.detections.append(Detection.from_record(json.loads(line)))
                except (json.JSONDecodeError, MalformedRecordError) as e:
                    if self.strict:
                        raise MalformedRecordError(f"{filepath}:{line_number}: {e}") from e
                    log.malformed += 1
                    logger.warning(f"Skipping malformed line {line_number} of {filepath}: {e}")
        logger.info(f"Loaded {len(log.detections)} detections from {filepath} ({log.malformed} malformed)")
        return log


class IntervalStorage(RecordStorage):
    """Reference presence intervals as JSON."""

    def save(self, records: Sequence[PresenceInterval], filepath: Path, metadata: Optional[Dict] = None) -> None:
        self.ensure_directory(filepath)
        data = {
            "metadata": dict(metadata or {}, total_intervals=len(records)),
            "intervals": [interval.to_dict() for interval in records],
        }
        with open(filepath, "w", encoding="utf-8", newline="\n") as f:
            json.dump(data, f, indent=2, sort_keys=True)
            f.write("\n")
        logger.info(f"Saved {len(records)} presence intervals to {filepath}")

    def load(self, filepath: Path) -> List[PresenceInterval]:
        if not filepath.exists():
            raise FileNotFoundError(f"Interval file not found: {filepath}")
        with open(filepath, "r", encoding="utf-8") as f:
            data = json.load(f)
        entries = data if isinstance(data, list) else data.get("intervals", [])
        return [PresenceInterval.from_dict(entry) for entry in entries]


class ManifestStorage(RecordStorage):
    """Run manifest: seed, configuration hash, produced files and counters."""

    def save(self, records: Dict, filepath: Path) -> None:
        self.ensure_directory(filepath)
        with open(filepath, "w", encoding="utf-8", newline="\n") as f:
            json.dump(records, f, indent=2, sort_keys=True)
            f.write("\n")

    def load(self, filepath: Path) -> Dict:
        if not filepath.exists():
            return {}
        with open(filepath, "r", encoding="utf-8") as f:
            return json.load(f)

    def update(self, filepath: Path, **entries) -> Dict:
        manifest = self.load(filepath)
        manifest.update(entries)
        self.save(manifest, filepath)
        return manifest


class VerdictStorage(RecordStorage):
    """Filter verdicts as CSV."""

    HEADERS = ["person_key", "t_start", "t_end", "kept", "reason", "hull_perimeter_m", "max_accel_mps2"]

    def save(self, records: Sequence[FilterVerdict], filepath: Path) -> None:
        self.ensure_directory(filepath)
        with open(filepath, "w", encoding="utf-8", newline="") as f:
            writer = csv.DictWriter(f, fieldnames=self.HEADERS, lineterminator="\n")
            writer.writeheader()
            for verdict in records:
                row = verdict.csv_row()
                for name in ("t_start", "t_end", "hull_perimeter_m", "max_accel_mps2"):
                    row[name] = format_number(row[name])
                row["kept"] = "true" if row["kept"] else "false"
                writer.writerow(row)
        logger.info(f"Saved {len(records)} verdicts to {filepath}")

    def load(self, filepath: Path) -> List[Dict]:
        with open(filepath, "r", encoding="utf-8") as f:
            return list(csv.DictReader(f))


class AmbulatogramStorage(RecordStorage):
    """Ambulatogram counts as ``zone,bin_start_s,count`` CSV."""

    def save(self, records: Ambulatogram, filepath: Path) -> None:
        self.ensure_directory(filepath)
        with open(filepath, "w", encoding="utf-8", newline="") as f:
            f.write(ambulatogram_csv(records))

    def load(self, filepath: Path, bin_width: Optional[float] = None) -> Ambulatogram:
        if not filepath.exists():
            raise FileNotFoundError(f"Ambulatogram not found: {filepath}")
        with open(filepath, "r", encoding="utf-8") as f:
            return parse_ambulatogram_csv(f.read(), bin_width=bin_width, label=filepath.stem)


class RunStorage:
    """Lays out the files of each simulated run under one output directory."""

    def __init__(self, output_dir: Path = Path("output")):
        self.output_dir = Path(output_dir)
        self.detections = DetectionStorage()
        self.intervals = IntervalStorage()
        self.manifest = ManifestStorage()
        self.verdicts = VerdictStorage()
        self.ambulatograms = AmbulatogramStorage()

    def run_dir(self, run: int) -> Path:
        return self.output_dir / f"run_{run:02d}"

    def run_dirs(self) -> List[Path]:
        """Existing run directories in order."""
        if not self.output_dir.exists():
            return []
        return sorted(p for p in self.output_dir.iterdir() if p.is_dir() and p.name.startswith("run_"))

    def detections_path(self, run: int) -> Path:
        return self.run_dir(run) / "detections.jsonl"

    def intervals_path(self, run: int) -> Path:
        return self.run_dir(run) / "intervals.json"

    def manifest_path(self, run: int) -> Path:
        return self.run_dir(run) / "manifest.json"

    def write_text(self, filepath: Path, text: str) -> Path:
        filepath.parent.mkdir(parents=True, exist_ok=True)
        with open(filepath, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        return filepath
