"""Deterministic CSV emission and re-parsing.

Every file the tool writes goes through ``write_csv``: UTF-8, comma
separated, '.' decimal, one header row, LF endings, floats rendered by
``repr`` so the shortest round-trip form is used.  No timestamps, host
names, or other run-dependent content belong in data rows; identical
inputs must produce byte-identical files.
"""

from __future__ import annotations

import numpy as np


def format_cell(x):
    if isinstance(x, str):
        if any(ch in x for ch in ",\n\r\""):
            raise ValueError("cell %r needs quoting, which this dialect forbids" % x)
        return x
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def write_csv(path, header, rows):
    """Write rows of cells; returns the path for chaining."""
    lines = [",".join(str(h) for h in header)]
    for row in rows:
        lines.append(",".join(format_cell(c) for c in row))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def _parse_cell(cell):
    if cell == "":
        return ""
    try:
        return float(cell)
    except ValueError:
        return cell


def read_csv(path):
    """Parse a file written by write_csv: (header, list of row tuples).

    Numeric cells come back as floats, everything else as the raw
    string.  Raises ValueError on ragged rows or a missing header.
    """
    with open(path, "r", encoding="utf-8", newline="") as fh:
        text = fh.read()
    lines = [ln for ln in text.split("\n") if ln != ""]
    if not lines:
        raise ValueError("%s: empty file" % path)
    header = lines[0].split(",")
    rows = []
    for ln in lines[1:]:
        cells = ln.split(",")
        if len(cells) != len(header):
            raise ValueError("%s: row width %d does not match header width %d"
                             % (path, len(cells), len(header)))
        rows.append(tuple(_parse_cell(c) for c in cells))
    return header, rows


def column(header, rows, name):
    """One column as a float array; non-numeric cells become NaN."""
    j = header.index(name)
    out = np.empty(len(rows))
    for i, row in enumerate(rows):
        out[i] = row[j] if isinstance(row[j], float) else np.nan
    return out


def trajectory_table(record):
    """(header, rows) for the modal trajectory of a run record."""
    n = record.a.shape[1]
    header = ["t"] + ["a%d" % (k + 1) for k in range(n)] \
                   + ["b%d" % (k + 1) for k in range(n)]
    rows = [(float(t),) + tuple(float(x) for x in a) + tuple(float(x) for x in b)
            for t, a, b in zip(record.times, record.a, record.b)]
    return header, rows


def ledger_table(ledger):
    header = list(ledger.COLUMNS)
    rows = [tuple(float(x) for x in row) for row in ledger.rows()]
    return header, rows


def kernel_report_table(report):
    header = ["check", "verdict", "margin", "t", "s"]
    rows = [(name, verdict, float(margin), float(t), float(s))
            for name, verdict, margin, t, s in report.rows]
    rows.append(("truncation_age", "info", float(report.s_truncation), "", ""))
    return header, rows
