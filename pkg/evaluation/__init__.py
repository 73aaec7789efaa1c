"""
Evaluation module: sensitivity and specificity against the reference.
"""

from .metrics import EvalReport, ZoneConfusion, Outcome, EvaluationError, evaluate, confusion_timeline, confusion_timelines, pool
from .report import (
    format_percent,
    results_frame,
    zone_frame,
    summary_frame,
    timeline_frame,
    frame_to_csv,
    evaluation_tables,
    table_text,
)

__all__ = [
    'EvalReport',
    'ZoneConfusion',
    'Outcome',
    'EvaluationError',
    'evaluate',
    'confusion_timeline',
    'confusion_timelines',
    'pool',
    'format_percent',
    'results_frame',
    'zone_frame',
    'summary_frame',
    'timeline_frame',
    'frame_to_csv',
    'evaluation_tables',
    'table_text',
]
