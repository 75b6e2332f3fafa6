"""Minimal HTML element tree shared by the table generator, normalizer,
and metrics. Tolerant of real-world noise (unclosed cells, stray wrappers);
comments are discarded at parse time.
"""

from __future__ import annotations

import html as _html
from dataclasses import dataclass, field
from html.parser import HTMLParser

VOID_TAGS = frozenset({"br", "hr", "img", "input", "meta", "link", "col", "wbr", "area", "base"})

# Opening one of these implicitly closes any of the mapped open tags.
_IMPLIED_CLOSE = {
    "tr": {"tr", "td", "th"},
    "td": {"td", "th"},
    "th": {"td", "th"},
    "thead": {"tr", "td", "th", "thead", "tbody", "tfoot"},
    "tbody": {"tr", "td", "th", "thead", "tbody", "tfoot"},
    "tfoot": {"tr", "td", "th", "thead", "tbody", "tfoot"},
}


@dataclass
class Element:
    tag: str
    attrs: dict = field(default_factory=dict)
    children: list = field(default_factory=list)  # Element | str

    def find_first(self, tag: str):
        """Depth-first search for the first descendant with this tag."""
        for child in self.children:
            if isinstance(child, Element):
                if child.tag == tag:
                    return child
                found = child.find_first(tag)
                if found is not None:
                    return found
        return None

    def iter_elements(self, tag: str | None = None):
        for child in self.children:
            if isinstance(child, Element):
                if tag is None or child.tag == tag:
                    yield child
                yield from child.iter_elements(tag)

    def text_content(self) -> str:
        parts = []
        for child in self.children:
            if isinstance(child, str):
                parts.append(child)
            else:
                parts.append(child.text_content())
        return "".join(parts)


class _TreeBuilder(HTMLParser):
    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.root = Element("#root")
        self.stack = [self.root]

    def _open_tags(self):
        return {el.tag for el in self.stack[1:]}

    def handle_starttag(self, tag, attrs):
        tag = tag.lower()
        closes = _IMPLIED_CLOSE.get(tag)
        if closes:
            while len(self.stack) > 1 and self.stack[-1].tag in closes:
                self.stack.pop()
        el = Element(tag, {k.lower(): (v if v is not None else "") for k, v in attrs})
        self.stack[-1].children.append(el)
        if tag not in VOID_TAGS:
            self.stack.append(el)

    def handle_endtag(self, tag):
        tag = tag.lower()
        for i in range(len(self.stack) - 1, 0, -1):
            if self.stack[i].tag == tag:
                del self.stack[i:]
                return
        # unmatched end tag: ignore

    def handle_data(self, data):
        if data:
            self.stack[-1].children.append(data)

    def handle_comment(self, data):
        pass  # comments never survive parsing


def parse_html(text: str) -> Element:
    """Parse into an Element tree rooted at a synthetic '#root'."""
    builder = _TreeBuilder()
    builder.feed(text)
    builder.close()
    return builder.root


def to_html(node: Element | str) -> str:
    """Compact serialization: no inter-tag whitespace, attrs in sorted order."""
    if isinstance(node, str):
        return _html.escape(node, quote=False)
    inner = "".join(to_html(child) for child in node.children)
    if node.tag == "#root":
        return inner
    attrs = "".join(' %s="%s"' % (k, _html.escape(str(v), quote=True))
                    for k, v in sorted(node.attrs.items()))
    if node.tag in VOID_TAGS and not node.children:
        return "<%s%s/>" % (node.tag, attrs)
    return "<%s%s>%s</%s>" % (node.tag, attrs, inner, node.tag)
