"""Chart annotation serialization: title, type, and a CSV-like data table.

Layout: line 1 "title: <title>", line 2 "type: <type>", line 3 a header
row, then one comma-separated row per record. Numbers are written in
shortest round-trip form, so parse(serialize(spec)) recovers the series
values exactly.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from ..errors import InvalidSpec, ParseError
from .spec import ChartSpec, Series, validate_chart_spec

_CATEGORY_HEADER = "label"


@dataclass(frozen=True)
class ChartAnnotation:
    title: str
    chart_type: str
    table: str  # CSV block: header row + data rows

    def text(self) -> str:
        return "title: %s\ntype: %s\n%s" % (self.title, self.chart_type, self.table)


@dataclass(frozen=True)
class ParsedAnnotation:
    title: str
    chart_type: str
    header: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]


def _fmt(value: float) -> str:
    value = float(value)
    if value.is_integer() and abs(value) < 1e16:
        return str(int(value))  # shortest form that parses back exactly
    return repr(value)


def _write_rows(rows: list[list[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    return buf.getvalue().rstrip("\n")


def _table_rows(spec: ChartSpec) -> list[list[str]]:
    t = spec.chart_type
    if spec.categories is not None:
        if len(spec.series) == 1:
            rows = [[_CATEGORY_HEADER, "value"]]
            for label, v in zip(spec.categories, spec.series[0].values):
                rows.append([label, _fmt(v)])
            return rows
        rows = [[_CATEGORY_HEADER] + [s.name for s in spec.series]]
        for i, label in enumerate(spec.categories):
            rows.append([label] + [_fmt(s.values[i]) for s in spec.series])
        return rows
    if t == "histogram":
        rows = [["value"]]
        rows.extend([_fmt(v)] for v in spec.series[0].values)
        return rows
    if t in ("box", "violin"):
        rows = [[_CATEGORY_HEADER, "value"]]
        for s in spec.series:
            rows.extend([s.name, _fmt(v)] for v in s.values)
        return rows
    if t in ("scatter", "bubble"):
        names = [s.name for s in spec.series]
        rows = [names]
        for i in range(len(spec.series[0].values)):
            rows.append([_fmt(s.values[i]) for s in spec.series])
        return rows
    raise InvalidSpec("no annotation schema for %r" % t)


def serialize_chart_annotation(spec: ChartSpec) -> ChartAnnotation:
    validate_chart_spec(spec)
    return ChartAnnotation(title=spec.title, chart_type=spec.chart_type,
                           table=_write_rows(_table_rows(spec)))


def parse_annotation_text(text: str) -> ParsedAnnotation:
    """Split an annotation into (title, type, header, raw rows)."""
    lines = text.split("\n")
    if len(lines) < 3:
        raise ParseError("annotation needs title, type, and a header row")
    if not lines[0].startswith("title: "):
        raise ParseError("line 1 must start with 'title: '")
    if not lines[1].startswith("type: "):
        raise ParseError("line 2 must start with 'type: '")
    title = lines[0][len("title: "):]
    chart_type = lines[1][len("type: "):]
    reader = csv.reader(io.StringIO("\n".join(lines[2:])))
    rows = [tuple(row) for row in reader if row]
    if not rows:
        raise ParseError("annotation has no data table")
    return ParsedAnnotation(title=title, chart_type=chart_type,
                            header=rows[0], rows=tuple(rows[1:]))


def parse_chart_annotation(text: str) -> ChartSpec:
    """Rebuild a data-only ChartSpec (default style) from annotation text."""
    parsed = parse_annotation_text(text)
    t = parsed.chart_type
    header, rows = parsed.header, parsed.rows

    if header and header[0] == _CATEGORY_HEADER and t not in ("box", "violin"):
        categories = tuple(row[0] for row in rows)
        if len(header) == 2 and header[1] == "value":
            series = (Series("value", tuple(float(row[1]) for row in rows)),)
        else:
            series = tuple(
                Series(name, tuple(float(row[k + 1]) for row in rows))
                for k, name in enumerate(header[1:]))
        spec = ChartSpec(t, parsed.title, series, categories)
    elif t == "histogram":
        series = (Series("value", tuple(float(row[0]) for row in rows)),)
        spec = ChartSpec(t, parsed.title, series, None)
    elif t in ("box", "violin"):
        order: list[str] = []
        grouped: dict[str, list[float]] = {}
        for label, value in rows:
            if label not in grouped:
                order.append(label)
                grouped[label] = []
            grouped[label].append(float(value))
        series = tuple(Series(name, tuple(grouped[name])) for name in order)
        spec = ChartSpec(t, parsed.title, series, None)
    elif t in ("scatter", "bubble"):
        columns = list(zip(*rows)) if rows else []
        if len(columns) != len(header):
            raise ParseError("ragged data table")
        series = tuple(Series(name, tuple(float(v) for v in col))
                       for name, col in zip(header, columns))
        spec = ChartSpec(t, parsed.title, series, None)
    else:
        raise ParseError("cannot reconstruct %r from annotation" % t)
    validate_chart_spec(spec)
    return spec
