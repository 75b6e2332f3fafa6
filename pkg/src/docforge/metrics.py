"""Evaluation metrics: word/character error rates and tree-edit-distance
similarity over tables.

TEDS follows the table-structure-recognition convention: ordered-tree edit
distance with unit insert/delete costs; substituting a node costs 1 when
the structural label (tag, colspan, rowspan) differs, otherwise the
normalized string edit distance between cell texts. Similarity is
1 - distance / max(tree sizes).
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass

from .errors import EmptyReference, ParseError
from .htmltree import Element, parse_html

_STRUCT_TAGS = {"table", "thead", "tbody", "tfoot", "tr"}
_CELL_TAGS = {"td", "th", "caption"}
_INLINE_TAGS = {"b", "i"}


def levenshtein(a, b) -> int:
    """Edit distance over two sequences (two-row DP)."""
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    previous = list(range(len(b) + 1))
    for i, item_a in enumerate(a, start=1):
        current = [i] + [0] * len(b)
        for j, item_b in enumerate(b, start=1):
            cost = 0 if item_a == item_b else 1
            current[j] = min(previous[j] + 1,
                             current[j - 1] + 1,
                             previous[j - 1] + cost)
        previous = current
    return previous[-1]


def word_error_rate(reference: str, hypothesis: str) -> float:
    """Token-level edit distance over whitespace tokens, divided by the
    reference token count; can exceed 1."""
    ref_tokens = unicodedata.normalize("NFC", reference).split()
    hyp_tokens = unicodedata.normalize("NFC", hypothesis).split()
    if not ref_tokens:
        raise EmptyReference("reference has no tokens")
    return levenshtein(ref_tokens, hyp_tokens) / len(ref_tokens)


def char_error_rate(reference: str, hypothesis: str) -> float:
    """Character-level edit distance after NFC, divided by reference length."""
    ref = unicodedata.normalize("NFC", reference)
    hyp = unicodedata.normalize("NFC", hypothesis)
    if not ref:
        raise EmptyReference("reference is empty")
    return levenshtein(ref, hyp) / len(ref)


@dataclass(frozen=True)
class TableTree:
    """Ordered labeled tree node: (tag, text, colspan, rowspan)."""

    tag: str
    text: str = ""
    colspan: int = 1
    rowspan: int = 1
    children: tuple = ()

    def size(self) -> int:
        return 1 + sum(child.size() for child in self.children)


def _int_attr(el: Element, name: str) -> int:
    raw = el.attrs.get(name)
    if raw is None:
        return 1
    try:
        value = int(str(raw).strip())
    except (TypeError, ValueError):
        raise ParseError("invalid %s value %r" % (name, raw))
    return max(1, value)


def _build_tree(el: Element) -> TableTree:
    if el.tag in _CELL_TAGS:
        return TableTree(tag=el.tag, text=el.text_content(),
                         colspan=_int_attr(el, "colspan"),
                         rowspan=_int_attr(el, "rowspan"))
    if el.tag not in _STRUCT_TAGS:
        raise ParseError("element %r is outside the canonical table subset "
                         "(normalize first)" % el.tag)
    children = []
    for child in el.children:
        if isinstance(child, str):
            if child.strip():
                raise ParseError("stray text %r outside cells" % child.strip()[:20])
            continue
        if child.tag in _INLINE_TAGS:
            raise ParseError("inline %r outside a cell" % child.tag)
        children.append(_build_tree(child))
    return TableTree(tag=el.tag, children=tuple(children))


def parse_table_tree(html: str) -> TableTree:
    """Build the ordered tree of a canonical-subset table."""
    root = parse_html(html)
    table = root.find_first("table")
    if table is None:
        raise ParseError("input contains no table element")
    return _build_tree(table)


def _postorder(root: TableTree) -> list[TableTree]:
    out: list[TableTree] = []

    def walk(node: TableTree):
        for child in node.children:
            walk(child)
        out.append(node)

    walk(root)
    return out


def _leftmost_leaves(nodes: list[TableTree]) -> list[int]:
    index = {id(node): i for i, node in enumerate(nodes)}
    lml = [0] * len(nodes)
    for i, node in enumerate(nodes):
        cur = node
        while cur.children:
            cur = cur.children[0]
        lml[i] = index[id(cur)]
    return lml


def _keyroots(lml: list[int]) -> list[int]:
    last = {}
    for i, l in enumerate(lml):
        last[l] = i
    return sorted(last.values())


def _rename_cost(a: TableTree, b: TableTree, structure_only: bool) -> float:
    if a.tag != b.tag or a.colspan != b.colspan or a.rowspan != b.rowspan:
        return 1.0
    if structure_only:
        return 0.0
    if a.text == b.text:
        return 0.0
    longest = max(len(a.text), len(b.text))
    if longest == 0:
        return 0.0
    return levenshtein(a.text, b.text) / longest


def tree_edit_distance(t1: TableTree, t2: TableTree, structure_only: bool = False) -> float:
    """Ordered-tree edit distance (Zhang-Shasha) under TEDS costs."""
    n1 = _postorder(t1)
    n2 = _postorder(t2)
    l1 = _leftmost_leaves(n1)
    l2 = _leftmost_leaves(n2)
    kr1 = _keyroots(l1)
    kr2 = _keyroots(l2)

    size1, size2 = len(n1), len(n2)
    treedist = [[0.0] * size2 for _ in range(size1)]
    rename_memo: dict[tuple[int, int], float] = {}

    def rename(i: int, j: int) -> float:
        key = (i, j)
        cost = rename_memo.get(key)
        if cost is None:
            cost = _rename_cost(n1[i], n2[j], structure_only)
            rename_memo[key] = cost
        return cost

    for i in kr1:
        li = l1[i]
        m = i - li + 2
        for j in kr2:
            lj = l2[j]
            n = j - lj + 2
            fd = [[0.0] * n for _ in range(m)]
            for di in range(1, m):
                fd[di][0] = fd[di - 1][0] + 1.0
            for dj in range(1, n):
                fd[0][dj] = fd[0][dj - 1] + 1.0
            for di in range(1, m):
                i1 = li + di - 1
                row = fd[di]
                above = fd[di - 1]
                for dj in range(1, n):
                    j1 = lj + dj - 1
                    if l1[i1] == li and l2[j1] == lj:
                        cost = min(above[dj] + 1.0,
                                   row[dj - 1] + 1.0,
                                   above[dj - 1] + rename(i1, j1))
                        treedist[i1][j1] = cost
                    else:
                        cost = min(above[dj] + 1.0,
                                   row[dj - 1] + 1.0,
                                   fd[l1[i1] - li][l2[j1] - lj] + treedist[i1][j1])
                    row[dj] = cost
    return treedist[size1 - 1][size2 - 1]


def teds(reference: TableTree, hypothesis: TableTree, structure_only: bool = False) -> float:
    """Tree-edit-distance similarity in [0, 1]; identical trees score 1."""
    distance = tree_edit_distance(reference, hypothesis, structure_only)
    largest = max(reference.size(), hypothesis.size())
    return max(0.0, min(1.0, 1.0 - distance / largest))


def teds_html(reference_html: str, hypothesis_html: str,
              structure_only: bool = False) -> float:
    return teds(parse_table_tree(reference_html), parse_table_tree(hypothesis_html),
                structure_only=structure_only)


def chart_annotation_score(reference_text: str, hypothesis_text: str) -> float:
    """Field-level exact-match score for chart annotations in [0, 1].

    Mean of three components: title match, type match, and the fraction of
    data cells matching by position. A stand-in for chart-extraction
    scoring when no external benchmark metric is available.
    """
    from .charts.annotation import parse_annotation_text

    try:
        ref = parse_annotation_text(reference_text)
        hyp = parse_annotation_text(hypothesis_text)
    except Exception:
        return 0.0
    title_score = 1.0 if ref.title == hyp.title else 0.0
    type_score = 1.0 if ref.chart_type == hyp.chart_type else 0.0
    ref_cells = [cell for row in ref.rows for cell in row]
    hyp_cells = [cell for row in hyp.rows for cell in row]
    if not ref_cells and not hyp_cells:
        cell_score = 1.0
    else:
        matches = sum(1 for a, b in zip(ref_cells, hyp_cells) if a == b)
        cell_score = matches / max(len(ref_cells), len(hyp_cells))
    return (title_score + type_score + cell_score) / 3.0
