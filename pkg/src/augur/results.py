"""Result tables and their CSV / JSON serialisation.

CSV output starts with ``#`` comment lines (config echo, artifact version,
timestamp, and any summary values), then a header row, then data rows.
Only the timestamp line differs between two runs of the same config.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any

from . import __version__


def _plain(v: Any) -> Any:
    if hasattr(v, "item"):  # numpy scalar
        v = v.item()
    if isinstance(v, float) and math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return v


def _cell(v: Any) -> str:
    v = _plain(v)
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


@dataclass
class ResultTable:
    columns: list[str]
    rows: list[list[Any]] = field(default_factory=list)
    config: dict[str, Any] = field(default_factory=dict)
    summary: dict[str, Any] = field(default_factory=dict)

    def add(self, *row: Any) -> None:
        if len(row) != len(self.columns):
            raise ValueError(f"expected {len(self.columns)} values, got {len(row)}")
        self.rows.append(list(row))

    def column(self, name: str) -> list[Any]:
        i = self.columns.index(name)
        return [r[i] for r in self.rows]

    def to_csv(self, timestamp: str | None = None) -> str:
        out = io.StringIO()
        stamp = timestamp or datetime.now(timezone.utc).isoformat(timespec="seconds")
        out.write(f"# config: {json.dumps(self.config, sort_keys=True, default=_plain)}\n")
        out.write(f"# version: {__version__}\n")
        for k, v in self.summary.items():
            out.write(f"# {k}: {_cell(v)}\n")
        out.write(f"# timestamp: {stamp}\n")
        w = csv.writer(out, lineterminator="\n")
        w.writerow(self.columns)
        for r in self.rows:
            w.writerow([_cell(v) for v in r])
        return out.getvalue()

    def to_json(self) -> str:
        config = dict(self.config, version=__version__)
        if self.summary:
            config["summary"] = {k: _plain(v) for k, v in self.summary.items()}
        rows = [{c: _plain(v) for c, v in zip(self.columns, r)} for r in self.rows]
        return json.dumps({"config": config, "rows": rows}, sort_keys=True, default=_plain,
                          indent=1) + "\n"

    def render(self, fmt: str = "csv") -> str:
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json()
        raise ValueError(f"unknown format {fmt!r}")


def read_csv(text: str) -> tuple[dict[str, str], list[dict[str, str]]]:
    """Parse CSV written by :meth:`ResultTable.to_csv` into (metadata, rows)."""
    meta: dict[str, str] = {}
    body = []
    for line in text.splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition(": ")
            meta[key] = value
        else:
            body.append(line)
    return meta, list(csv.DictReader(body))
