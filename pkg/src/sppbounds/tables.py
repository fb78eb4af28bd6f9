"""Deterministic CSV output for sweep and figure data."""

from __future__ import annotations

import csv
import math
from typing import IO, Iterable, Optional, Sequence

SIG_DIGITS = 12


def fmt(value: Optional[float]) -> str:
    """Render a cell with 12 significant digits; independent of locale.

    Infinite values are written as ``inf``, undefined ones as ``nan``.
    """
    if value is None:
        return "nan"
    if isinstance(value, bool):
        return "1" if value else "0"
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    if value == 0.0:
        return "0"
    return format(value, f".{SIG_DIGITS}g")


def write_csv(out: IO[str], header: Sequence[str], rows: Iterable[Sequence[Optional[float]]]) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        if len(row) != len(header):
            raise ValueError(f"row has {len(row)} cells, header has {len(header)}")
        writer.writerow([fmt(v) for v in row])
