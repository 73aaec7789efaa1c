"""
CSV and SVG output of ambulatograms.
"""

import csv
import io
import math
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from jinja2 import Template
from loguru import logger

from .models import Ambulatogram, AmbulatogramMismatchError, CopresenceInterval

TEMPLATE_DIR = Path(__file__).resolve().parent.parent / "templates"
CSV_HEADER = ("zone", "bin_start_s", "count")

PALETTE = ("#d95f02", "#1b9e77", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666")
OUTCOME_COLORS = {"FP": "#d62728", "FN": "#1f77b4"}

_PLOT_WIDTH = 960
_MARGIN_LEFT = 110
_ROW_HEIGHT = 18
_PANEL_GAP = 30


def format_number(value: float) -> str:
    """Six significant digits, no exponent for ordinary magnitudes."""
    return f"{value:.6g}"


def ambulatogram_csv(amb: Ambulatogram) -> str:
    """``zone,bin_start_s,count`` rows, zone-major, LF line endings."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    starts = [format_number(s) for s in amb.bin_starts()]
    for zone, row in zip(amb.zone_names, amb.counts):
        for start, count in zip(starts, row):
            writer.writerow((zone, start, int(count)))
    return buffer.getvalue()


def parse_ambulatogram_csv(text: str, bin_width: Optional[float] = None, label: str = "") -> Ambulatogram:
    """Inverse of ``ambulatogram_csv``; ``bin_width`` is required for single-bin files."""
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_HEADER:
        raise ValueError(f"Expected header {','.join(CSV_HEADER)}, got {reader.fieldnames}")
    rows: Dict[str, List[Tuple[float, int]]] = {}
    for record in reader:
        rows.setdefault(record["zone"], []).append((float(record["bin_start_s"]), int(record["count"])))
    if not rows:
        raise ValueError("Ambulatogram CSV holds no rows")

    starts = sorted({start for values in rows.values() for start, _ in values})
    if bin_width is None:
        if len(starts) < 2:
            raise ValueError("bin_width is needed to read a single-bin ambulatogram")
        bin_width = starts[1] - starts[0]
    t0 = starts[0]
    t1 = t0 + bin_width * len(starts)
    counts = np.zeros((len(rows), len(starts)), dtype=np.int64)
    position = {start: i for i, start in enumerate(starts)}
    for z, values in enumerate(rows.values()):
        for start, count in values:
            counts[z, position[start]] = count
    return Ambulatogram(bin_width, t0, t1, tuple(rows), counts, label)


def copresence_csv(report: Sequence[Tuple[str, CopresenceInterval]], label: str = "") -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(("ambulatogram", "zone", "t_start_s", "t_end_s", "max_count"))
    for zone, interval in report:
        writer.writerow((label, zone, format_number(interval.t_start), format_number(interval.t_end), interval.max_count))
    return buffer.getvalue()


def daytime_label(stamp: float, compression: float, day_start_hours: float) -> str:
    """Clock time of a scenario stamp, e.g. 1020 s at compression 60 from 01:00 -> '18:00'."""
    minutes = int(round((day_start_hours * 3600.0 + stamp * compression) / 60.0)) % (24 * 60)
    return f"{minutes // 60:02d}:{minutes % 60:02d}"


def _load_template(filename: str, template_dir: Path = TEMPLATE_DIR) -> Template:
    template_path = template_dir / filename
    if not template_path.exists():
        raise FileNotFoundError(f"Template not found: {template_path}")
    with open(template_path, "r", encoding="utf-8") as f:
        return Template(f.read(), trim_blocks=True, lstrip_blocks=True, keep_trailing_newline=True)


def _stretches(values: Sequence) -> List[Tuple[int, int, object]]:
    """(first_bin, end_bin, value) for each stretch of equal values."""
    stretches = []
    start = 0
    for b in range(1, len(values) + 1):
        if b == len(values) or values[b] != values[start]:
            stretches.append((start, b, values[start]))
            start = b
    return stretches


def _runs(row: np.ndarray) -> List[Tuple[int, int, int]]:
    """(first_bin, end_bin, count) for each stretch of equal non-zero counts."""
    return [(first, end, int(count)) for first, end, count in _stretches(row) if count > 0]


def ambulatogram_svg(
    amb: Ambulatogram,
    reference: Ambulatogram,
    compression: float = 60.0,
    day_start_hours: float = 1.0,
    errors: Optional[Mapping[str, Sequence[str]]] = None,
) -> str:
    """
    Measured panel above reference panel, one row per zone.

    ``errors`` maps a zone to one outcome label per bin (``TP``, ``FP``,
    ``TN``, ``FN``); its FP and FN stretches are marked under the measured
    rows.
    """
    if reference.n_bins != amb.n_bins or not math.isclose(reference.bin_width, amb.bin_width):
        raise AmbulatogramMismatchError("Measured and reference ambulatograms differ in bins")
    errors = errors or {}
    for zone, outcomes in errors.items():
        if len(outcomes) != amb.n_bins:
            raise AmbulatogramMismatchError(f"Outcomes of '{zone}' cover {len(outcomes)} bins, expected {amb.n_bins}")

    def span_label(first: int, end: int) -> str:
        return (
            f"{daytime_label(amb.t0 + first * amb.bin_width, compression, day_start_hours)}-"
            f"{daytime_label(amb.t0 + end * amb.bin_width, compression, day_start_hours)}"
        )

    n_bins = max(amb.n_bins, 1)
    bin_px = _PLOT_WIDTH / n_bins
    peak = max(int(amb.counts.max(initial=0)), int(reference.counts.max(initial=0)), 1)
    colors = {zone: PALETTE[i % len(PALETTE)] for i, zone in enumerate(reference.zone_names)}

    panels = []
    y = 20
    for panel_id, title, source in (("measured", amb.label or "measured", amb), ("reference", "reference", reference)):
        rows = []
        title_y = y
        y += 10
        for zone, counts in zip(source.zone_names, source.counts):
            baseline = y + _ROW_HEIGHT
            bars = []
            for first, end, count in _runs(counts):
                height = (_ROW_HEIGHT - 2) * count / peak
                bars.append({
                    "x": f"{_MARGIN_LEFT + first * bin_px:.2f}",
                    "y": f"{baseline - height:.2f}",
                    "width": f"{(end - first) * bin_px:.2f}",
                    "height": f"{height:.2f}",
                    "tooltip": f"{span_label(first, end)}: {count}",
                })
            marks = []
            if panel_id == "measured":
                for first, end, outcome in _stretches([str(getattr(o, "value", o)) for o in errors.get(zone, ())]):
                    if outcome in OUTCOME_COLORS:
                        marks.append({
                            "kind": outcome,
                            "x": f"{_MARGIN_LEFT + first * bin_px:.2f}",
                            "y": f"{baseline + 0.5:.2f}",
                            "width": f"{(end - first) * bin_px:.2f}",
                            "color": OUTCOME_COLORS[outcome],
                            "tooltip": span_label(first, end),
                        })
            rows.append({
                "zone": zone,
                "label_y": f"{baseline - 4:.2f}",
                "baseline": f"{baseline:.2f}",
                "color": colors.get(zone, PALETTE[-1]),
                "bars": bars,
                "marks": marks,
            })
            y += _ROW_HEIGHT
        legend = panel_id == "measured" and bool(errors)
        panels.append({"id": panel_id, "title": title, "title_y": title_y, "rows": rows, "legend": legend})
        y += _PANEL_GAP

    axis_y = y - _PANEL_GAP + 8
    ticks = []
    span_seconds = amb.t1 - amb.t0
    if span_seconds > 0:
        start_day_s = day_start_hours * 3600.0 + amb.t0 * compression
        first_hour = int(math.ceil(start_day_s / 3600.0))
        last_hour = int(math.floor((day_start_hours * 3600.0 + amb.t1 * compression) / 3600.0))
        step = 2 if last_hour - first_hour > 12 else 1
        for hour in range(first_hour, last_hour + 1):
            if hour % step:
                continue
            stamp = (hour * 3600.0 - day_start_hours * 3600.0) / compression
            ticks.append({
                "x": f"{_MARGIN_LEFT + (stamp - amb.t0) / span_seconds * _PLOT_WIDTH:.2f}",
                "label": f"{hour % 24:02d}:00",
            })

    template = _load_template("ambulatogram.svg.j2")
    return template.render(
        width=_MARGIN_LEFT + _PLOT_WIDTH + 20,
        height=axis_y + 30,
        margin_left=_MARGIN_LEFT,
        plot_right=_MARGIN_LEFT + _PLOT_WIDTH,
        panels=panels,
        axis_y=axis_y,
        ticks=ticks,
        outcome_colors=OUTCOME_COLORS,
    )


def render(
    amb: Ambulatogram,
    reference: Ambulatogram,
    path: Path,
    compression: float = 60.0,
    day_start_hours: float = 1.0,
    errors: Optional[Mapping[str, Sequence[str]]] = None,
) -> Dict[str, Path]:
    """Write ``<path>.csv`` (counts of ``amb``) and ``<path>.svg`` (amb above reference)."""
    path = Path(path)
    amb.check_compatible(reference)
    svg = ambulatogram_svg(amb, reference, compression, day_start_hours, errors)
    path.parent.mkdir(parents=True, exist_ok=True)
    saved = {"csv": path.with_suffix(".csv"), "svg": path.with_suffix(".svg")}
    with open(saved["csv"], "w", encoding="utf-8", newline="") as f:
        f.write(ambulatogram_csv(amb))
    with open(saved["svg"], "w", encoding="utf-8", newline="") as f:
        f.write(svg)
    logger.info(f"Rendered {amb.label or 'ambulatogram'} to {saved['csv']} and {saved['svg']}")
    return saved
