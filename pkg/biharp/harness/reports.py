"""
Report emission: JSON for machines, aligned columns for people, CSV for
constant tables.
"""

import csv
import io
import json
from pathlib import Path
from typing import Iterable, Optional, Sequence

from pydantic import BaseModel

from ..schemas.report import ConstantRow, RunReport


def to_json(model: BaseModel, include_timestamp: bool = True) -> str:
    """Canonical JSON: aliased names, sorted keys, two-space indent, trailing newline."""
    exclude = None if include_timestamp else {"generated_at"}
    data = model.model_dump(mode="json", by_alias=True, exclude=exclude)
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def _table(headers: Sequence[str], rows: Iterable[Sequence[str]]) -> list[str]:
    rows = [list(row) for row in rows]
    widths = [max([len(h)] + [len(row[i]) for row in rows]) for i, h in enumerate(headers)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for row in rows:
        lines.append("  ".join(cell.rjust(w) if i else cell.ljust(w) for i, (cell, w) in enumerate(zip(row, widths))))
    return lines


def render_text(report: RunReport) -> str:
    lines = [f"{report.schema_tag}: {len(report.fixtures)} passed, {len(report.failures)} failed"]
    if report.generated_at:
        lines.append(f"generated {report.generated_at}")
    lines.append("")
    lines.extend(
        _table(
            ("metric", "count", "min", "median", "max"),
            (
                (key, str(a.count), f"{a.minimum:.6g}", f"{a.median:.6g}", f"{a.maximum:.6g}")
                for key, a in report.aggregates.items()
            ),
        )
    )
    if report.failures:
        lines.append("")
        lines.append("failures:")
        for failure in report.failures:
            lines.append(
                f"  ensemble {failure.ensemble} ({failure.kind}, seed {failure.seed}) fixture {failure.index} "
                f"p={failure.p:g} at {failure.stage}: {failure.error}: {failure.message}"
            )
    return "\n".join(lines) + "\n"


def render_csv(rows: Sequence[BaseModel]) -> str:
    if not rows:
        return ""
    buffer = io.StringIO()
    fields = list(type(rows[0]).model_fields)
    writer = csv.DictWriter(buffer, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row.model_dump(mode="json"))
    return buffer.getvalue()


def render_constants_text(rows: Sequence[ConstantRow]) -> str:
    headers = ("p", "theta", "q", "count", "A_p max", "lower max", "c_p max", "C_p(eps) max")
    body = (
        (f"{r.p:g}", f"{r.theta:g}", f"{r.q:.6g}", str(r.count), f"{r.ap_max:.6g}", f"{r.lower_max:.6g}", f"{r.cp_max:.6g}", f"{r.fs_max:.6g}")
        for r in rows
    )
    return "\n".join(_table(headers, body)) + "\n"


def write_output(text: str, path: Optional[Path]) -> None:
    """Write to `path`, or stdout when no path is given."""
    if path is None:
        print(text, end="")
        return
    Path(path).write_text(text, encoding="utf-8")
