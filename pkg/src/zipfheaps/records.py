"""CSV / JSON-lines serialization shared by the CLI and the scripts.

Files are UTF-8 with LF line endings and a header on the first line.
Floats are written with ``repr`` so they round-trip exactly.
"""
from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import IO, Iterable, Sequence

GROWTH_HEADER = ("m", "d")
RANK_HEADER = ("token", "count")
EXPECT_HEADER = ("method", "value", "error")


def fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _json_value(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def write_records(records: Sequence[dict], out: IO[str], fmt_name: str = "csv") -> None:
    """Write dict records; CSV takes its header from the first record."""
    if fmt_name == "jsonl":
        for rec in records:
            out.write(json.dumps({k: _json_value(v) for k, v in rec.items()}) + "\n")
        return
    if not records:
        return
    writer = csv.writer(out, lineterminator="\n")
    header = list(records[0])
    writer.writerow(header)
    for rec in records:
        writer.writerow([fmt(rec[k]) for k in header])


def write_table(path: str | Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) for v in row])


def _number(text: str):
    try:
        return int(text)
    except ValueError:
        return float(text)


def read_growth_csv(path: str | Path) -> list[tuple]:
    """``(m, d)`` pairs from a CSV with an ``m,d`` header."""
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header[:2]] != list(GROWTH_HEADER):
            raise ValueError(f"{path}: expected header 'm,d', got {header!r}")
        return [(_number(row[0]), _number(row[1])) for row in reader if row]


def read_rank_csv(path: str | Path) -> list[tuple[str, int]]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or header[:2] != list(RANK_HEADER):
            raise ValueError(f"{path}: expected header 'token,count', got {header!r}")
        return [(row[0], int(row[1])) for row in reader if row]
