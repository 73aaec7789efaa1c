"""
Whole-sequence artifact filter.

Two false-detection classes are removed: static objects taken for a person
(small convex hull of the floor projection) and trajectories mixed between
two people (acceleration spike of the center of mass).
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from ingestion import TrackSequence

from .features import acceleration_profile, max_acceleration
from .hull import area_of_hull, convex_hull, perimeter_of_hull

DEFAULT_PERIMETER_THRESHOLD = 1.0
DEFAULT_ACCEL_THRESHOLD = 50.0
DEFAULT_AREA_THRESHOLD = 0.1


class RemovalReason(str, Enum):
    STATIC_PERIMETER = "static-perimeter"
    STATIC_AREA = "static-area"
    HIGH_ACCELERATION = "high-acceleration"


@dataclass(frozen=True)
class FilterConfig:
    """Thresholds and options of the artifact filter."""

    perimeter_threshold: float = DEFAULT_PERIMETER_THRESHOLD
    accel_threshold: float = DEFAULT_ACCEL_THRESHOLD
    static_feature: str = "perimeter"
    area_threshold: float = DEFAULT_AREA_THRESHOLD
    criteria_order: Tuple[str, ...] = ("static", "acceleration")
    split_on_spike: bool = False

    def __post_init__(self):
        if self.perimeter_threshold <= 0:
            raise ValueError(f"perimeter_threshold must be positive, got {self.perimeter_threshold}")
        if self.accel_threshold <= 0:
            raise ValueError(f"accel_threshold must be positive, got {self.accel_threshold}")
        if self.area_threshold <= 0:
            raise ValueError(f"area_threshold must be positive, got {self.area_threshold}")
        if self.static_feature not in ("perimeter", "area"):
            raise ValueError(f"static_feature must be 'perimeter' or 'area', got {self.static_feature!r}")
        object.__setattr__(self, "criteria_order", tuple(self.criteria_order))
        if sorted(self.criteria_order) != ["acceleration", "static"]:
            raise ValueError(f"criteria_order must name 'static' and 'acceleration' once each, got {self.criteria_order}")

    def to_dict(self) -> Dict:
        return {
            "perimeter_threshold": self.perimeter_threshold,
            "accel_threshold": self.accel_threshold,
            "static_feature": self.static_feature,
            "area_threshold": self.area_threshold,
            "criteria_order": list(self.criteria_order),
            "split_on_spike": self.split_on_spike,
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "FilterConfig":
        known = {k: v for k, v in data.items() if k in cls.__dataclass_fields__}
        if "criteria_order" in known:
            known["criteria_order"] = tuple(known["criteria_order"])
        return cls(**known)


@dataclass(frozen=True)
class FilterVerdict:
    sequence: TrackSequence = field(compare=False)
    kept: bool
    reason: Optional[RemovalReason]
    hull_perimeter: float
    hull_area: float
    max_accel: float

    def __post_init__(self):
        if self.kept != (self.reason is None):
            raise ValueError("A verdict is kept exactly when it has no removal reason")

    @property
    def reason_label(self) -> str:
        return self.reason.value if self.reason else "none"

    def csv_row(self) -> Dict:
        sensor, local_id = self.sequence.person_key
        return {
            "person_key": f"{sensor}/user{local_id}",
            "t_start": self.sequence.t_start,
            "t_end": self.sequence.t_end,
            "kept": self.kept,
            "reason": self.reason_label,
            "hull_perimeter_m": self.hull_perimeter,
            "max_accel_mps2": self.max_accel,
        }


def judge(seq: TrackSequence, cfg: FilterConfig) -> FilterVerdict:
    """Verdict for a single sequence."""
    hull = convex_hull(seq.positions[:, :2])
    perimeter = perimeter_of_hull(hull)
    area = area_of_hull(hull)
    accel = max_acceleration(seq)

    def static_reason() -> Optional[RemovalReason]:
        if cfg.static_feature == "area":
            return RemovalReason.STATIC_AREA if area < cfg.area_threshold else None
        return RemovalReason.STATIC_PERIMETER if perimeter < cfg.perimeter_threshold else None

    def accel_reason() -> Optional[RemovalReason]:
        return RemovalReason.HIGH_ACCELERATION if accel > cfg.accel_threshold else None

    checks: Dict[str, Callable[[], Optional[RemovalReason]]] = {"static": static_reason, "acceleration": accel_reason}
    reason = None
    for criterion in cfg.criteria_order:
        reason = checks[criterion]()
        if reason is not None:
            break
    logger.debug(
        f"{seq.person_key} [{seq.t_start:.1f}, {seq.t_end:.1f}]: perimeter {perimeter:.3f} m, "
        f"area {area:.4f} m2, accel {accel:.1f} m/s2 -> {reason.value if reason else 'kept'}"
    )
    return FilterVerdict(seq, reason is None, reason, perimeter, area, accel)


def split_at_spikes(seq: TrackSequence, accel_threshold: float) -> List[TrackSequence]:
    """Cut a sequence at every step that produces an acceleration spike."""
    profile = acceleration_profile(seq.stamps, seq.positions)
    steps = np.linalg.norm(np.diff(seq.positions, axis=0), axis=1)
    cuts = set()
    for k in np.flatnonzero(profile > accel_threshold):
        # profile[k] belongs to sample k + 1; cut on its larger neighbouring step
        i = int(k) + 1
        cuts.add(i if steps[i - 1] >= steps[i] else i + 1)
    pieces = []
    start = 0
    for cut in sorted(cuts):
        if cut > start and cut < len(seq):
            pieces.append(seq.slice(start, cut))
            start = cut
    pieces.append(seq.slice(start, len(seq)))
    return pieces


def apply_filter(seqs: Sequence[TrackSequence], cfg: Optional[FilterConfig] = None) -> List[FilterVerdict]:
    """Verdicts in input order; with ``split_on_spike`` each piece gets its own verdict."""
    cfg = cfg or FilterConfig()
    verdicts: List[FilterVerdict] = []
    for seq in seqs:
        pieces = split_at_spikes(seq, cfg.accel_threshold) if cfg.split_on_spike else [seq]
        verdicts.extend(judge(piece, cfg) for piece in pieces)

    removed = [v for v in verdicts if not v.kept]
    if removed:
        reasons: Dict[str, int] = {}
        for verdict in removed:
            reasons[verdict.reason_label] = reasons.get(verdict.reason_label, 0) + 1
        logger.info(f"Filter removed {len(removed)}/{len(verdicts)} sequences: {reasons}")
    return verdicts


def kept_sequences(verdicts: Sequence[FilterVerdict]) -> List[TrackSequence]:
    return [v.sequence for v in verdicts if v.kept]
