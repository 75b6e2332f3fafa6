"""Convert LaTeX tabular sources to canonical table HTML.

Supported subset: one tabular environment, & separators, \\\\ row breaks,
horizontal rules (\\hline and the booktabs synonyms), \\multicolumn,
\\multirow (including the multicolumn-wrapped form), and inline
\\textbf/\\textit/\\emph. Anything else raises UnsupportedConstruct with
the construct's name; structurally broken input raises ParseError.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..errors import ParseError, UnsupportedConstruct
from ..htmltree import Element, to_html
from .html import TableGroundTruth, parse_table_grid
from .normalize import normalize_table_html

_BEGIN = re.compile(r"\\begin\s*\{tabular\*?\}")
_END = re.compile(r"\\end\s*\{tabular\*?\}")
_RULE_COMMANDS = {"hline", "toprule", "midrule", "bottomrule", "cline"}
_FORMAT_COMMANDS = {"textbf": "b", "textit": "i", "emph": "i"}


@dataclass
class _Cell:
    colspan: int = 1
    rowspan: int = 1
    children: list = field(default_factory=list)  # str | Element

    def text(self) -> str:
        parts = []
        for child in self.children:
            parts.append(child if isinstance(child, str) else child.text_content())
        return "".join(parts).strip()


def _strip_comments(src: str) -> str:
    out = []
    i = 0
    while i < len(src):
        ch = src[i]
        if ch == "\\" and i + 1 < len(src):
            out.append(src[i:i + 2])
            i += 2
            continue
        if ch == "%":
            while i < len(src) and src[i] != "\n":
                i += 1
            continue
        out.append(ch)
        i += 1
    return "".join(out)


def _read_group(src: str, i: int) -> tuple[str, int]:
    """Read one balanced {...} group starting at src[i]; returns (body, end)."""
    while i < len(src) and src[i].isspace():
        i += 1
    if i >= len(src) or src[i] != "{":
        raise ParseError("expected '{' at offset %d" % i)
    depth = 0
    j = i
    while j < len(src):
        ch = src[j]
        if ch == "\\" and j + 1 < len(src):
            j += 2
            continue
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
            if depth == 0:
                return src[i + 1:j], j + 1
        j += 1
    raise ParseError("unbalanced braces in group starting at offset %d" % i)


def _skip_optional(src: str, i: int) -> int:
    while i < len(src) and src[i].isspace():
        i += 1
    if i < len(src) and src[i] == "[":
        j = src.find("]", i)
        if j < 0:
            raise ParseError("unterminated optional argument")
        return j + 1
    return i


def _find_tabular(src: str) -> tuple[str, str]:
    """Locate the first tabular environment; returns (colspec, body)."""
    m = _BEGIN.search(src)
    if m is None:
        raise ParseError("no tabular environment found")
    colspec, i = _read_group(src, m.end())
    e = _END.search(src, i)
    if e is None:
        raise ParseError("tabular environment never closed")
    inner = src[i:e.start()]
    if _BEGIN.search(inner):
        raise UnsupportedConstruct("nested tabular")
    return colspec, inner


def count_columns(colspec: str) -> int:
    """Columns declared by an lcr/p-style column specification."""
    count = 0
    i = 0
    while i < len(colspec):
        ch = colspec[i]
        if ch in "lcr":
            count += 1
            i += 1
        elif ch in "pmb" and i + 1 < len(colspec) and colspec[i + 1] == "{":
            _, i = _read_group(colspec, i + 1)
            count += 1
        elif ch in "|! @><":
            if i + 1 < len(colspec) and colspec[i + 1] == "{":
                _, i = _read_group(colspec, i + 1)
            else:
                i += 1
        elif ch == "*":
            reps, i = _read_group(colspec, i + 1)
            inner, i = _read_group(colspec, i)
            try:
                count += int(reps.strip()) * count_columns(inner)
            except ValueError:
                raise ParseError("bad repetition count %r in column spec" % reps)
        else:
            i += 1
    if count == 0:
        raise ParseError("column spec %r declares no columns" % colspec)
    return count


def _split_depth0(src: str, sep: str) -> list[str]:
    parts = []
    buf = []
    depth = 0
    i = 0
    while i < len(src):
        ch = src[i]
        if ch == "\\" and i + 1 < len(src) and src[i + 1] in "{}&%$#_\\":
            buf.append(src[i:i + 2])
            i += 2
            continue
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth = max(0, depth - 1)
        if ch == sep and depth == 0:
            parts.append("".join(buf))
            buf = []
        else:
            buf.append(ch)
        i += 1
    parts.append("".join(buf))
    return parts


def _split_rows(body: str) -> list[str]:
    rows = []
    buf = []
    depth = 0
    i = 0
    while i < len(body):
        ch = body[i]
        if ch == "\\" and i + 1 < len(body) and body[i + 1] == "\\":
            if depth == 0:
                rows.append("".join(buf))
                buf = []
                i += 2
                i = _skip_optional(body, i)
                continue
            buf.append("\\\\")
            i += 2
            continue
        if ch == "\\" and i + 1 < len(body) and body[i + 1] in "{}&%$#_":
            buf.append(body[i:i + 2])
            i += 2
            continue
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth = max(0, depth - 1)
        buf.append(ch)
        i += 1
    rows.append("".join(buf))
    return rows


def _strip_rules(row: str) -> str:
    i = 0
    while True:
        while i < len(row) and row[i].isspace():
            i += 1
        m = re.match(r"\\([a-zA-Z]+)", row[i:])
        if not m or m.group(1) not in _RULE_COMMANDS:
            return row[i:]
        i += m.end()
        if m.group(1) == "cline":
            _, i2 = _read_group(row, i)
            i = i2


def _parse_inline(src: str) -> list:
    """Cell content to text + b/i elements; unknown commands are errors."""
    out: list = []
    buf: list[str] = []

    def flush():
        if buf:
            out.append("".join(buf))
            del buf[:]

    i = 0
    while i < len(src):
        ch = src[i]
        if ch == "\\":
            nxt = src[i + 1] if i + 1 < len(src) else ""
            if nxt in "&%$#_{} \\":
                buf.append(nxt if nxt != "\\" else "\\")
                i += 2
                continue
            m = re.match(r"\\([a-zA-Z]+)", src[i:])
            if not m:
                raise UnsupportedConstruct("stray backslash")
            cmd = m.group(1)
            if cmd in _FORMAT_COMMANDS:
                group, end = _read_group(src, i + m.end())
                flush()
                el = Element(_FORMAT_COMMANDS[cmd])
                el.children = _parse_inline(group)
                out.append(el)
                i = end
                continue
            if cmd in _RULE_COMMANDS:
                i += m.end()
                continue
            raise UnsupportedConstruct(cmd)
        if ch == "$":
            raise UnsupportedConstruct("math")
        if ch == "~":
            buf.append(" ")
            i += 1
            continue
        if ch in "{}":
            i += 1
            continue
        buf.append(ch)
        i += 1
    flush()
    return out


def _parse_cell(src: str) -> _Cell:
    cell = _Cell()
    src = " ".join(src.split())
    m = re.match(r"\\multicolumn\s*", src)
    if m:
        n, i = _read_group(src, m.end())
        _, i = _read_group(src, i)  # alignment spec, ignored
        content, i = _read_group(src, i)
        if src[i:].strip():
            raise UnsupportedConstruct("content after multicolumn group")
        try:
            cell.colspan = int(n.strip())
        except ValueError:
            raise ParseError("bad multicolumn count %r" % n)
        src = content.strip()
    m = re.match(r"\\multirow\s*", src)
    if m:
        i = _skip_optional(src, m.end())
        n, i = _read_group(src, i)
        _, i = _read_group(src, i)  # width, ignored
        content, i = _read_group(src, i)
        if src[i:].strip():
            raise UnsupportedConstruct("content after multirow group")
        try:
            cell.rowspan = int(n.strip())
        except ValueError:
            raise ParseError("bad multirow count %r" % n)
        src = content.strip()
    cell.children = _parse_inline(src)
    return cell


def latex_table_to_html(src: str) -> TableGroundTruth:
    """Parse the first tabular environment into canonical HTML ground truth."""
    colspec, body = _find_tabular(_strip_comments(src))
    n_cols = count_columns(colspec)

    raw_rows = []
    for raw in _split_rows(body):
        raw = _strip_rules(raw)
        if raw.strip():
            raw_rows.append(raw)
    if not raw_rows:
        raise ParseError("tabular has no rows")

    pending: dict[int, int] = {}
    table = Element("table")
    for raw in raw_rows:
        tr = Element("tr")
        c = 0
        for cell_src in _split_depth0(raw, "&"):
            cell = _parse_cell(cell_src)
            if pending.get(c, 0) > 0:
                if cell.text():
                    raise UnsupportedConstruct("non-empty cell under a multirow span")
                for cc in range(c, c + cell.colspan):
                    if pending.get(cc, 0) > 0:
                        pending[cc] -= 1
                c += cell.colspan
                continue
            td = Element("td")
            if cell.colspan > 1:
                td.attrs["colspan"] = str(cell.colspan)
            if cell.rowspan > 1:
                td.attrs["rowspan"] = str(cell.rowspan)
            content = cell.children
            # trim outer whitespace of the cell, preserve inner structure
            if content and isinstance(content[0], str):
                content[0] = content[0].lstrip()
            if content and isinstance(content[-1], str):
                content[-1] = content[-1].rstrip()
            td.children = [c2 for c2 in content if c2 != ""]
            tr.children.append(td)
            if cell.rowspan > 1:
                for cc in range(c, c + cell.colspan):
                    pending[cc] = cell.rowspan - 1
            c += cell.colspan
        while c < n_cols:
            if pending.get(c, 0) > 0:
                pending[c] -= 1
                c += 1
                continue
            tr.children.append(Element("td"))
            c += 1
        if c > n_cols:
            raise ParseError("row spans %d columns but spec declares %d" % (c, n_cols))
        table.children.append(tr)

    html = normalize_table_html(to_html(table))
    return TableGroundTruth(html=html, grid=parse_table_grid(html))
