"""
Tabular output of evaluation results: a sensitivity/specificity text table and CSV frames.
"""

import io
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import pandas as pd
from jinja2 import Template

from ambulatogram import Ambulatogram

from .metrics import EvalReport, Outcome, pool

TEMPLATE_DIR = Path(__file__).resolve().parent.parent / "templates"

ScopedReport = Tuple[str, EvalReport]


def format_percent(value: Optional[float]) -> str:
    """Integer percentage rounded half-up; ``n/a`` when undefined."""
    if value is None:
        return "n/a"
    percent = (Decimal(repr(value)) * 100).quantize(Decimal("1"), rounding=ROUND_HALF_UP)
    return f"{percent}%"


def _load_template(filename: str, template_dir: Path = TEMPLATE_DIR) -> Template:
    template_path = template_dir / filename
    if not template_path.exists():
        raise FileNotFoundError(f"Template not found: {template_path}")
    with open(template_path, "r", encoding="utf-8") as f:
        return Template(f.read(), trim_blocks=True, lstrip_blocks=True, keep_trailing_newline=True)


def results_frame(scoped: Sequence[ScopedReport]) -> pd.DataFrame:
    """One row per (scope, label): ratios and outcome durations in seconds."""
    records = []
    for scope, report in scoped:
        totals = report.totals
        records.append({
            "scope": scope,
            "label": report.label,
            "sensitivity": report.sensitivity,
            "specificity": report.specificity,
            "tp_s": totals.tp,
            "fp_s": totals.fp,
            "tn_s": totals.tn,
            "fn_s": totals.fn,
        })
    return pd.DataFrame.from_records(
        records, columns=["scope", "label", "sensitivity", "specificity", "tp_s", "fp_s", "tn_s", "fn_s"]
    )


def zone_frame(scoped: Sequence[ScopedReport]) -> pd.DataFrame:
    records = []
    for scope, report in scoped:
        for zone, confusion in report.per_zone.items():
            records.append({
                "scope": scope,
                "label": report.label,
                "zone": zone,
                "sensitivity": report.zone_sensitivity(zone),
                "specificity": report.zone_specificity(zone),
                "tp_s": confusion.tp,
                "fp_s": confusion.fp,
                "tn_s": confusion.tn,
                "fn_s": confusion.fn,
            })
    return pd.DataFrame.from_records(
        records, columns=["scope", "label", "zone", "sensitivity", "specificity", "tp_s", "fp_s", "tn_s", "fn_s"]
    )


def summary_frame(per_run: Sequence[ScopedReport]) -> pd.DataFrame:
    """Mean and sample standard deviation of the per-run ratios, by label."""
    frame = results_frame(per_run)
    if frame.empty:
        return pd.DataFrame(columns=["label", "sensitivity_mean", "sensitivity_sd", "specificity_mean", "specificity_sd", "runs"])
    frame[["sensitivity", "specificity"]] = frame[["sensitivity", "specificity"]].astype(float)
    grouped = frame.groupby("label", sort=False)
    summary = pd.DataFrame({
        "sensitivity_mean": grouped["sensitivity"].mean(),
        "sensitivity_sd": grouped["sensitivity"].std(),
        "specificity_mean": grouped["specificity"].mean(),
        "specificity_sd": grouped["specificity"].std(),
        "runs": grouped.size(),
    })
    return summary.reset_index()


def timeline_frame(timelines: Dict[str, Sequence[Outcome]], amb: Ambulatogram) -> pd.DataFrame:
    """One row per (zone, bin): the bin start and its outcome."""
    starts = amb.bin_starts()
    records = [
        {"zone": zone, "bin_start_s": float(start), "outcome": Outcome(outcome).value}
        for zone, outcomes in timelines.items()
        for start, outcome in zip(starts, outcomes)
    ]
    return pd.DataFrame.from_records(records, columns=["zone", "bin_start_s", "outcome"])


def frame_to_csv(frame: pd.DataFrame) -> str:
    buffer = io.StringIO()
    frame.to_csv(buffer, index=False, float_format="%.6g", lineterminator="\n", na_rep="")
    return buffer.getvalue()


def evaluation_tables(per_run: Dict[str, Sequence[EvalReport]]) -> List[ScopedReport]:
    """
    Per-run reports plus pooled reports.

    ``per_run`` maps a run name to that run's reports (one per label, e.g.
    raw and filtered). With more than one run a ``pooled`` scope is added.
    """
    scoped: List[ScopedReport] = []
    by_label: Dict[str, List[EvalReport]] = {}
    for run, reports in per_run.items():
        for report in reports:
            scoped.append((run, report))
            by_label.setdefault(report.label, []).append(report)
    if len(per_run) > 1:
        scoped.extend(("pooled", pool(reports, label)) for label, reports in by_label.items())
    return scoped


def table_text(scoped: Sequence[ScopedReport], summary: Optional[pd.DataFrame] = None) -> str:
    """Two-column sensitivity/specificity table per scope, pooled first."""
    scopes: Dict[str, List[EvalReport]] = {}
    for scope, report in scoped:
        scopes.setdefault(scope, []).append(report)
    order = sorted(scopes, key=lambda s: (s != "pooled", s))

    sections = []
    for scope in order:
        rows = [
            {"label": r.label, "sensitivity": format_percent(r.sensitivity), "specificity": format_percent(r.specificity)}
            for r in scopes[scope]
        ]
        sections.append({"title": f"Report ({scope})", "rows": rows})

    if summary is not None and not summary.empty and int(summary["runs"].max()) > 1:
        rows = []
        for record in summary.itertuples(index=False):
            rows.append({
                "label": record.label,
                "sensitivity": _mean_sd(record.sensitivity_mean, record.sensitivity_sd),
                "specificity": _mean_sd(record.specificity_mean, record.specificity_sd),
            })
        sections.append({"title": f"Mean +/- sd over {int(summary['runs'].max())} runs", "rows": rows})

    return _load_template("eval_table.txt").render(sections=sections, rule="-" * 40)


def _mean_sd(mean: float, sd: float) -> str:
    if pd.isna(mean):
        return "n/a"
    spread = "n/a" if pd.isna(sd) else format_percent(float(sd)).rstrip("%")
    return f"{format_percent(float(mean)).rstrip('%')}+/-{spread}%"
