"""Plain-text output helpers shared by the table writers and the CLI."""
from __future__ import annotations

import csv
import io
import math

SIG_DIGITS = 12


def fmt(x) -> str:
    """Locale-independent float formatting with 12 significant digits."""
    if isinstance(x, bool):
        return str(int(x))
    if isinstance(x, int):
        return str(x)
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    out = f"{x:.{SIG_DIGITS}g}"
    return "0" if out == "-0" else out


def write_csv(header, rows, dest=None) -> str:
    """Write ``rows`` under ``header``; return the text, also writing to ``dest`` if given.

    ``dest`` may be a path or an open text stream.
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([v if isinstance(v, str) else fmt(v) for v in row])
    text = buf.getvalue()
    if dest is not None:
        if hasattr(dest, "write"):
            dest.write(text)
        else:
            with open(dest, "w", encoding="ascii", newline="") as fh:
                fh.write(text)
    return text
