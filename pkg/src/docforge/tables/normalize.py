"""Reduce arbitrary table HTML to the canonical subset.

Strips wrapper elements, styling attributes, comments and inter-tag
whitespace; keeps only table structure and the visible cell content. The
result is idempotent under re-normalization and preserves cell text
verbatim.
"""

from __future__ import annotations

from ..errors import NoTableFound
from ..htmltree import Element, parse_html, to_html

KEEP_TAGS = frozenset({"table", "caption", "thead", "tbody", "tfoot",
                       "tr", "th", "td", "b", "i"})
_SECTION_TAGS = ("thead", "tbody", "tfoot")
_SPAN_ATTRS = ("colspan", "rowspan")


def _clean_span_attrs(el: Element) -> dict:
    attrs = {}
    for name in _SPAN_ATTRS:
        raw = el.attrs.get(name)
        if raw is None:
            continue
        try:
            value = int(str(raw).strip())
        except (TypeError, ValueError):
            continue
        if value > 1:
            attrs[name] = str(value)
    return attrs


def _transform(node, in_cell: bool) -> list:
    """Map a node to its canonical replacement(s); non-kept tags unwrap."""
    if isinstance(node, str):
        return [node] if in_cell else []
    tag = node.tag
    if tag in ("td", "th"):
        el = Element(tag, _clean_span_attrs(node))
        for child in node.children:
            el.children.extend(_transform(child, in_cell=True))
        return [el]
    if tag == "caption":
        el = Element("caption")
        for child in node.children:
            el.children.extend(_transform(child, in_cell=True))
        return [el]
    if tag in ("b", "i"):
        if in_cell:
            el = Element(tag)
            for child in node.children:
                el.children.extend(_transform(child, in_cell=True))
            return [el]
        spliced = []
        for child in node.children:
            spliced.extend(_transform(child, in_cell=False))
        return spliced
    if tag in ("table", "tr") or tag in _SECTION_TAGS:
        el = Element(tag)
        for child in node.children:
            el.children.extend(_transform(child, in_cell=False))
        return [el]
    # anything else is a wrapper: splice its children
    spliced = []
    for child in node.children:
        spliced.extend(_transform(child, in_cell=in_cell))
    return spliced


def _restructure_table(table: Element) -> Element:
    """Enforce canonical section layout: caption?, thead?, tbody, tfoot?."""
    caption = None
    head_rows: list[Element] = []
    body_rows: list[Element] = []
    foot_rows: list[Element] = []
    for child in table.children:
        if not isinstance(child, Element):
            continue
        if child.tag == "caption" and caption is None:
            caption = child
        elif child.tag == "thead":
            head_rows.extend(el for el in child.children
                             if isinstance(el, Element) and el.tag == "tr")
        elif child.tag == "tfoot":
            foot_rows.extend(el for el in child.children
                             if isinstance(el, Element) and el.tag == "tr")
        elif child.tag == "tbody":
            body_rows.extend(el for el in child.children
                             if isinstance(el, Element) and el.tag == "tr")
        elif child.tag == "tr":
            body_rows.append(child)

    for tr in head_rows + body_rows + foot_rows:
        tr.children = [c for c in tr.children
                       if isinstance(c, Element) and c.tag in ("td", "th")]

    out = Element("table")
    if caption is not None:
        out.children.append(caption)
    if head_rows:
        out.children.append(Element("thead", children=list(head_rows)))
    if body_rows:
        out.children.append(Element("tbody", children=list(body_rows)))
    if foot_rows:
        out.children.append(Element("tfoot", children=list(foot_rows)))
    return out


def normalize_table_html(html: str) -> str:
    """Canonicalize the first table found in `html`; NoTableFound otherwise."""
    root = parse_html(html)
    table = root.find_first("table")
    if table is None:
        raise NoTableFound("input contains no table element")
    [clean] = _transform(table, in_cell=False)
    return to_html(_restructure_table(clean))
