"""OutputRecord rendering: table, JSON, CSV."""

import csv
import io
from pathlib import Path
from typing import Any

import orjson

from src.commands.records import OutputFormat, OutputRecord
from src.config import settings


def _cell(value: Any, digits: int | None) -> str:
    """CSV는 repr 정밀도, 표는 유효숫자 digits 자리."""
    if isinstance(value, bool) or value is None:
        return "" if value is None else str(value).lower()
    if isinstance(value, float):
        return f"{value:.{digits}g}" if digits else repr(value)
    if isinstance(value, (list, tuple)):
        return ",".join(_cell(v, digits) for v in value)
    return str(value)


def to_json(record: OutputRecord) -> str:
    """orjson 직렬화 (float은 최단 round-trip 표현)."""
    payload = record.model_dump(mode="json")
    return orjson.dumps(payload, option=orjson.OPT_INDENT_2 | orjson.OPT_SERIALIZE_NUMPY).decode() + "\n"


def to_csv(record: OutputRecord) -> str:
    """rows가 있으면 행 데이터, 없으면 (name, value) 두 열."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    if record.rows:
        header = list(record.rows[0].keys())
        writer.writerow(header)
        for row in record.rows:
            writer.writerow([_cell(row.get(k), None) for k in header])
    else:
        writer.writerow(["name", "value"])
        for name, value in record.results.items():
            writer.writerow([name, _cell(value, None)])
    return buffer.getvalue()


def to_table(record: OutputRecord, digits: int | None = None) -> str:
    """사람이 읽는 표 (기본 유효숫자 9자리)."""
    digits = digits or settings.display_digits
    lines = [f"{record.command} ({', '.join(p.value for p in record.provenance)})"]
    params = {k: v for k, v in record.params.items() if v is not None}
    if params:
        lines.append("  " + "  ".join(f"{k}={_cell(v, digits)}" for k, v in params.items()))
    if record.seed is not None:
        lines.append(f"  seed={record.seed}")
    lines.append("")

    if record.results:
        width = max(len(k) for k in record.results)
        for name, value in record.results.items():
            if isinstance(value, str) and "\n" in value:
                lines.append(value)
            else:
                lines.append(f"{name:<{width}}  {_cell(value, digits)}")

    if record.rows:
        header = list(record.rows[0].keys())
        body = [[_cell(row.get(k), digits) for k in header] for row in record.rows]
        widths = [max(len(h), *(len(r[i]) for r in body)) for i, h in enumerate(header)]
        lines.append("  ".join(h.rjust(w) for h, w in zip(header, widths)))
        for r in body:
            lines.append("  ".join(c.rjust(w) for c, w in zip(r, widths)))

    lines.append("")
    lines.append("OK" if record.ok else "FAILED")
    for violation in record.violations:
        lines.append(f"  - {violation}")
    return "\n".join(lines) + "\n"


RENDERERS = {
    OutputFormat.TABLE: to_table,
    OutputFormat.JSON: to_json,
    OutputFormat.CSV: to_csv,
}


def render(record: OutputRecord, fmt: OutputFormat | str = OutputFormat.TABLE) -> str:
    """지정 형식으로 렌더링."""
    return RENDERERS[OutputFormat(fmt)](record)


def write_output(text: str, path: str | Path) -> Path:
    """파일로 저장.

    Raises:
        OSError: 경로가 메시지에 포함된 I/O 오류
    """
    target = Path(path)
    try:
        target.write_text(text, encoding="utf-8")
    except OSError as e:
        raise OSError(f"출력 파일을 쓸 수 없습니다: {target}: {e.strerror or e}") from e
    return target
