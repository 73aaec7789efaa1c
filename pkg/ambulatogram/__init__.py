"""
Ambulatogram module: per-zone people counts over time and co-presence.
"""

from .models import (
    Ambulatogram,
    PresenceInterval,
    CopresenceInterval,
    AmbulatogramMismatchError,
    UnknownZoneError,
    IntervalOverlapError,
    bin_count,
)
from .builder import build, reference_ambulatogram, copresence, copresence_report
from .render import (
    render,
    ambulatogram_csv,
    ambulatogram_svg,
    parse_ambulatogram_csv,
    copresence_csv,
    daytime_label,
    format_number,
    CSV_HEADER,
)

__all__ = [
    'Ambulatogram',
    'PresenceInterval',
    'CopresenceInterval',
    'AmbulatogramMismatchError',
    'UnknownZoneError',
    'IntervalOverlapError',
    'bin_count',
    'build',
    'reference_ambulatogram',
    'copresence',
    'copresence_report',
    'render',
    'ambulatogram_csv',
    'ambulatogram_svg',
    'parse_ambulatogram_csv',
    'copresence_csv',
    'daytime_label',
    'format_number',
    'CSV_HEADER',
]
