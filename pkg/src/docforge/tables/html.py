"""Canonical HTML emission and structural parsing for tables.

The canonical form is the fixed point of normalize_table_html: element set
{table, caption, thead, tbody, tfoot, tr, th, td, b, i}, attributes limited
to rowspan/colspan greater than one, no inter-tag whitespace, sections in
caption/thead/tbody/tfoot order.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import NoTableFound, ParseError, SpecViolation
from ..htmltree import Element, parse_html, to_html
from .spec import TableSpec, anchors, logical_grid, validate_table_spec

Grid = tuple[tuple[tuple[int, int], ...], ...]


@dataclass(frozen=True)
class TableGroundTruth:
    """Canonical HTML plus the logical ownership grid it encodes."""

    html: str
    grid: Grid

    @property
    def rows(self) -> int:
        return len(self.grid)

    @property
    def cols(self) -> int:
        return len(self.grid[0]) if self.grid else 0


def table_to_html(spec: TableSpec, content: list[list[str]]) -> TableGroundTruth:
    """Emit canonical HTML for the spec's grid with the given cell texts."""
    validate_table_spec(spec)
    if len(content) != spec.rows or any(len(row) != spec.cols for row in content):
        raise SpecViolation("content grid shape %dx%d does not match spec %dx%d"
                            % (len(content), len(content[0]) if content else 0,
                               spec.rows, spec.cols))

    by_row: dict[int, list[tuple[int, int, int, int]]] = {}
    for r, c, rs, cs in anchors(spec):
        by_row.setdefault(r, []).append((r, c, rs, cs))

    def cell_element(r: int, c: int, rs: int, cs: int) -> Element:
        tag = "th" if r < spec.header_rows else "td"
        attrs = {}
        if cs > 1:
            attrs["colspan"] = str(cs)
        if rs > 1:
            attrs["rowspan"] = str(rs)
        el = Element(tag, attrs)
        text = content[r][c]
        if text:
            el.children.append(text)
        return el

    def row_element(r: int) -> Element:
        tr = Element("tr")
        for (rr, c, rs, cs) in by_row.get(r, []):
            tr.children.append(cell_element(rr, c, rs, cs))
        return tr

    table = Element("table")
    if spec.caption:
        cap = Element("caption")
        cap.children.append(spec.caption)
        table.children.append(cap)
    body_start, body_end = spec.header_rows, spec.rows - spec.footer_rows
    if spec.header_rows:
        thead = Element("thead")
        thead.children = [row_element(r) for r in range(0, body_start)]
        table.children.append(thead)
    tbody = Element("tbody")
    tbody.children = [row_element(r) for r in range(body_start, body_end)]
    table.children.append(tbody)
    if spec.footer_rows:
        tfoot = Element("tfoot")
        tfoot.children = [row_element(r) for r in range(body_end, spec.rows)]
        table.children.append(tfoot)

    return TableGroundTruth(html=to_html(table), grid=logical_grid(spec))


def _table_rows(table: Element) -> list[Element]:
    """tr elements of a table in document order (sections or bare rows)."""
    rows = []
    for child in table.children:
        if not isinstance(child, Element):
            continue
        if child.tag == "tr":
            rows.append(child)
        elif child.tag in ("thead", "tbody", "tfoot"):
            rows.extend(el for el in child.children
                        if isinstance(el, Element) and el.tag == "tr")
    return rows


def _span(el: Element, name: str) -> int:
    raw = el.attrs.get(name, "1")
    try:
        value = int(str(raw).strip())
    except (TypeError, ValueError):
        raise ParseError("invalid %s value %r" % (name, raw))
    if value < 1:
        raise ParseError("non-positive %s value %r" % (name, raw))
    return value


def parse_table_grid(html: str) -> Grid:
    """Reconstruct the logical ownership grid from table HTML.

    Standard tiling: cells fill each row left-to-right, skipping positions
    occupied by spans from earlier rows. Ragged results raise ParseError.
    """
    root = parse_html(html)
    table = root.find_first("table")
    if table is None:
        raise NoTableFound("input contains no table element")
    rows = _table_rows(table)
    if not rows:
        raise ParseError("table has no rows")

    occupancy: dict[tuple[int, int], tuple[int, int]] = {}
    n_cols = 0
    for r, tr in enumerate(rows):
        c = 0
        for cell in tr.children:
            if not isinstance(cell, Element) or cell.tag not in ("td", "th"):
                continue
            while (r, c) in occupancy:
                c += 1
            rs = _span(cell, "rowspan")
            cs = _span(cell, "colspan")
            if rs > len(rows) - r:
                raise ParseError("rowspan %d exceeds remaining rows at row %d" % (rs, r))
            for rr in range(r, r + rs):
                for cc in range(c, c + cs):
                    if (rr, cc) in occupancy:
                        raise ParseError("overlapping cells at (%d, %d)" % (rr, cc))
                    occupancy[(rr, cc)] = (r, c)
            c += cs
            n_cols = max(n_cols, c)

    grid = []
    for r in range(len(rows)):
        row = []
        for c in range(n_cols):
            owner = occupancy.get((r, c))
            if owner is None:
                raise ParseError("grid position (%d, %d) is uncovered" % (r, c))
            row.append(owner)
        grid.append(tuple(row))
    return tuple(grid)


def cell_texts(html: str) -> list[str]:
    """Text of every td/th in document order (b/i flattened)."""
    root = parse_html(html)
    table = root.find_first("table")
    if table is None:
        raise NoTableFound("input contains no table element")
    out = []
    for tr in _table_rows(table):
        for cell in tr.children:
            if isinstance(cell, Element) and cell.tag in ("td", "th"):
                out.append(cell.text_content())
    return out


def replace_cell_texts(html: str, texts: list[str]) -> str:
    """New HTML with cell texts substituted in document order.

    Structure (tags, spans, sections, caption) is untouched; inline b/i
    inside replaced cells is dropped in favor of the plain new text.
    """
    root = parse_html(html)
    table = root.find_first("table")
    if table is None:
        raise NoTableFound("input contains no table element")
    cells = [cell for tr in _table_rows(table) for cell in tr.children
             if isinstance(cell, Element) and cell.tag in ("td", "th")]
    if len(cells) != len(texts):
        raise ParseError("expected %d replacement texts, got %d"
                         % (len(cells), len(texts)))
    for cell, text in zip(cells, texts):
        cell.children = [text] if text else []
    return to_html(table)
