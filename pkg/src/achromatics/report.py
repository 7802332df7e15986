"""CSV emission with round-trippable numbers."""

from __future__ import annotations

import csv
import io
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence


def format_value(value) -> str:
    """17 significant digits for reals; ``float(text)`` recovers the value bitwise."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, (float, Fraction)):
        return "%.17g" % float(value)
    return str(value)


def emit_report(rows: Iterable[Mapping], columns: Optional[Sequence[str]] = None) -> str:
    """Render rows sharing one schema as CSV, header first, ``\\n`` line ends.

    ``columns`` fixes the header; otherwise it is taken from the first row,
    and an empty report needs it.
    """
    rows = list(rows)
    if columns is None:
        if not rows:
            raise ValueError("columns are required for an empty report")
        columns = list(rows[0])
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        if set(row) != set(columns):
            raise ValueError(f"row keys {sorted(row)} do not match columns {list(columns)}")
        writer.writerow([format_value(row[c]) for c in columns])
    return buf.getvalue()


def parse_report(text: str) -> list:
    """Rows of an emitted report as dicts of strings."""
    return list(csv.DictReader(io.StringIO(text)))
