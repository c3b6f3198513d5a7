"""Result tables and their CSV/JSON serialization."""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass

__all__ = ["ResultTable", "export_table", "import_table_json", "format_number"]


def format_number(v):
    """12-significant-digit text; infinities become ``inf`` / ``-inf``."""
    if isinstance(v, bool) or v is None:
        return str(v)
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return format(v, ".12g")
    return str(v)


def _json_value(v):
    if isinstance(v, bool) or isinstance(v, (int, str)) or v is None:
        return v
    v = float(v)
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return float(format(v, ".12g"))


def _from_json_value(v):
    if v == "inf":
        return math.inf
    if v == "-inf":
        return -math.inf
    return v


@dataclass(frozen=True)
class ResultTable:
    """Named columns and rows of plain Python scalars."""

    columns: tuple
    rows: tuple

    def __post_init__(self):
        cols = tuple(str(c) for c in self.columns)
        if len(set(cols)) != len(cols):
            raise ValueError("duplicate column names")
        rows = tuple(tuple(r) for r in self.rows)
        for r in rows:
            if len(r) != len(cols):
                raise ValueError(f"row has {len(r)} values for {len(cols)} columns")
        object.__setattr__(self, "columns", cols)
        object.__setattr__(self, "rows", rows)

    def __len__(self):
        return len(self.rows)

    def column(self, name):
        j = self.columns.index(name)
        return [r[j] for r in self.rows]

    def records(self):
        return [dict(zip(self.columns, r)) for r in self.rows]

    def rounded(self):
        """The table as it reads back after a JSON round trip."""
        return ResultTable(self.columns, [[_from_json_value(_json_value(v)) for v in r] for r in self.rows])


def export_table(table, path, fmt="csv"):
    if len(table) == 0:
        raise ValueError("refusing to export an empty table")
    if fmt == "csv":
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(table.columns)
            for r in table.rows:
                w.writerow([format_number(v) for v in r])
    elif fmt == "json":
        data = [{c: _json_value(v) for c, v in zip(table.columns, r)} for r in table.rows]
        with open(path, "w") as fh:
            json.dump(data, fh, indent=1)
            fh.write("\n")
    else:
        raise ValueError(f"unknown table format {fmt!r}; use csv or json")


def import_table_json(path):
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, list) or not data:
        raise ValueError("expected a nonempty JSON array of objects")
    cols = tuple(data[0].keys())
    rows = []
    for obj in data:
        if tuple(obj.keys()) != cols:
            raise ValueError("rows disagree on column names")
        rows.append([_from_json_value(obj[c]) for c in cols])
    return ResultTable(cols, rows)
