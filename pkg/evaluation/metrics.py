"""
Duration-based sensitivity and specificity of measured zone occupancy.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence

import numpy as np

from ambulatogram import Ambulatogram, AmbulatogramMismatchError, UnknownZoneError


class EvaluationError(ValueError):
    """Inputs that cannot be compared."""


class Outcome(str, Enum):
    TP = "TP"
    FP = "FP"
    TN = "TN"
    FN = "FN"


@dataclass
class ZoneConfusion:
    """Seconds of each outcome for one zone."""

    tp: float = 0.0
    fp: float = 0.0
    tn: float = 0.0
    fn: float = 0.0

    def __add__(self, other: "ZoneConfusion") -> "ZoneConfusion":
        return ZoneConfusion(self.tp + other.tp, self.fp + other.fp, self.tn + other.tn, self.fn + other.fn)

    def to_dict(self) -> Dict[str, float]:
        return {"tp": self.tp, "fp": self.fp, "tn": self.tn, "fn": self.fn}


def _ratio(numerator: float, denominator: float) -> Optional[float]:
    return numerator / denominator if denominator > 0 else None


@dataclass
class EvalReport:
    label: str
    per_zone: Dict[str, ZoneConfusion] = field(default_factory=dict)

    @property
    def totals(self) -> ZoneConfusion:
        total = ZoneConfusion()
        for confusion in self.per_zone.values():
            total = total + confusion
        return total

    @property
    def sensitivity(self) -> Optional[float]:
        """TP / (TP + FN); ``None`` without reference-occupied time."""
        t = self.totals
        return _ratio(t.tp, t.tp + t.fn)

    @property
    def specificity(self) -> Optional[float]:
        """TN / (TN + FP); ``None`` without reference-empty time."""
        t = self.totals
        return _ratio(t.tn, t.tn + t.fp)

    def zone_sensitivity(self, zone: str) -> Optional[float]:
        c = self.per_zone[zone]
        return _ratio(c.tp, c.tp + c.fn)

    def zone_specificity(self, zone: str) -> Optional[float]:
        c = self.per_zone[zone]
        return _ratio(c.tn, c.tn + c.fp)


def _occupancy(measured: Ambulatogram, reference: Ambulatogram, zone: str):
    try:
        return measured.row(zone) > 0, reference.row(zone) > 0
    except UnknownZoneError as e:
        raise EvaluationError(str(e)) from e


def _check_inputs(measured: Ambulatogram, reference: Ambulatogram) -> None:
    try:
        measured.check_compatible(reference)
    except AmbulatogramMismatchError as e:
        raise EvaluationError(str(e)) from e


def evaluate(
    measured: Ambulatogram,
    reference: Ambulatogram,
    covered_zones: Sequence[str],
    label: Optional[str] = None,
) -> EvalReport:
    """Accumulate bin durations of TP/FP/TN/FN over the covered zones."""
    if not covered_zones:
        raise EvaluationError("No covered zones to evaluate")
    _check_inputs(measured, reference)
    report = EvalReport(label=label if label is not None else measured.label)
    for zone in covered_zones:
        m, r = _occupancy(measured, reference, zone)
        width = measured.bin_width
        report.per_zone[zone] = ZoneConfusion(
            tp=float(np.sum(m & r)) * width,
            fp=float(np.sum(m & ~r)) * width,
            tn=float(np.sum(~m & ~r)) * width,
            fn=float(np.sum(~m & r)) * width,
        )
    return report


def confusion_timeline(
    measured: Ambulatogram,
    reference: Ambulatogram,
    zone: str,
    covered_zones: Sequence[str],
) -> List[Outcome]:
    """Outcome of every bin of one covered zone."""
    if zone not in covered_zones:
        raise EvaluationError(f"Zone '{zone}' is not covered by any sensor")
    _check_inputs(measured, reference)
    m, r = _occupancy(measured, reference, zone)
    outcomes = []
    for measured_on, reference_on in zip(m, r):
        if measured_on:
            outcomes.append(Outcome.TP if reference_on else Outcome.FP)
        else:
            outcomes.append(Outcome.FN if reference_on else Outcome.TN)
    return outcomes


def confusion_timelines(
    measured: Ambulatogram,
    reference: Ambulatogram,
    covered_zones: Sequence[str],
) -> Dict[str, List[Outcome]]:
    """``confusion_timeline`` of every covered zone, in zone-map order."""
    return {
        zone: confusion_timeline(measured, reference, zone, covered_zones)
        for zone in reference.zone_names
        if zone in covered_zones
    }


def pool(reports: Sequence[EvalReport], label: Optional[str] = None) -> EvalReport:
    """Sum per-zone durations over runs."""
    if not reports:
        raise EvaluationError("Nothing to pool")
    pooled = EvalReport(label=label if label is not None else reports[0].label)
    for report in reports:
        for zone, confusion in report.per_zone.items():
            pooled.per_zone[zone] = pooled.per_zone.get(zone, ZoneConfusion()) + confusion
    return pooled
