"""Report assembly and deterministic CSV emission.

A report is a table of topical-type rows plus an Average row recomputed from
the metric columns. Headers echo the effective configuration and input
hashes so a run can be reproduced; wall-clock time is deliberately kept out
of the serialized form so identical invocations emit identical bytes.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .ioutil import write_text_atomic

__all__ = ["Report", "write_text_atomic"]

CellValue = float | int | str | None


@dataclass
class Report:
    command: str
    model: str
    columns: list[str]
    metric_columns: set[str]  # averaged into the Average row
    header: list[tuple[str, str]] = field(default_factory=list)
    rows: list[tuple[str, dict[str, CellValue]]] = field(default_factory=list)
    created_at: float = field(default_factory=time.time)  # not serialized

    def add_header(self, key: str, value: str) -> None:
        self.header.append((key, value))

    def add_row(self, name: str, values: dict[str, CellValue]) -> None:
        unknown = set(values) - set(self.columns)
        if unknown:
            raise ValueError(f"row values for unknown columns: {sorted(unknown)}")
        self.rows.append((name, values))

    def average(self) -> dict[str, float]:
        """Arithmetic mean of each metric column over rows with a value."""
        out: dict[str, float] = {}
        for col in self.columns:
            if col not in self.metric_columns:
                continue
            values = [
                row[col]
                for _, row in self.rows
                if isinstance(row.get(col), (int, float))
            ]
            if values:
                out[col] = sum(values) / len(values)
        return out

    def to_csv(self, decimals: int = 4) -> str:
        lines = [f"# command: {self.command}", f"# model: {self.model}"]
        for key, value in self.header:
            lines.append(f"# {key}: {value}")
        lines.append(",".join(["topical_type", *self.columns]))
        for name, values in self.rows:
            cells = [_csv_escape(name)]
            cells += [_format_cell(values.get(col), decimals) for col in self.columns]
            lines.append(",".join(cells))
        avg = self.average()
        cells = ["Average"]
        cells += [_format_cell(avg.get(col), decimals) for col in self.columns]
        lines.append(",".join(cells))
        return "\n".join(lines) + "\n"


def _format_cell(value: CellValue, decimals: int) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return f"{value:.{decimals}f}"
    return _csv_escape(str(value))


def _csv_escape(text: str) -> str:
    if any(ch in text for ch in ',"\n'):
        return '"' + text.replace('"', '""') + '"'
    return text
