"""Reconstruct paragraphs from OCR lines.

Lines become nodes of an adjacency graph; two lines are connected when
their baselines are no further apart than the page's median line spacing
and their horizontal extents overlap by at least 30% of the upper line's
width. Connected components are the paragraphs.
"""

from __future__ import annotations

import statistics
from collections import deque
from dataclasses import dataclass

from .errors import EmptyPage
from .ingest import BoundingBox, OcrLine, PageAnnotation


@dataclass(frozen=True)
class LayoutParams:
    """Edge predicate knobs.

    overlap_threshold: minimum horizontal overlap as a fraction of the
        upper line's width (inclusive).
    spacing_multiplier: baseline gap allowance as a multiple of the page's
        median line spacing (inclusive).
    """

    overlap_threshold: float = 0.30
    spacing_multiplier: float = 1.0

    def __post_init__(self):
        if not (0.0 < self.overlap_threshold <= 1.0):
            raise ValueError("overlap_threshold must be in (0, 1]")
        if self.spacing_multiplier <= 0:
            raise ValueError("spacing_multiplier must be positive")


@dataclass(frozen=True)
class Paragraph:
    paragraph_id: int
    line_ids: tuple[str, ...]
    union_bbox: BoundingBox
    reading_order: int


def median_line_spacing(page: PageAnnotation) -> float:
    """Median of positive gaps between consecutive baselines.

    Lines sharing a baseline contribute no gap. Pages with no positive gap
    (single line, or all lines on one row) fall back to the median line
    height.
    """
    if not page.lines:
        raise EmptyPage("page %d has no lines" % page.page_index)
    baselines = sorted(ln.baseline_y for ln in page.lines)
    gaps = [b - a for a, b in zip(baselines, baselines[1:]) if b - a > 0]
    if gaps:
        return statistics.median(gaps)
    return statistics.median(ln.bbox.height for ln in page.lines)


def horizontal_overlap_ratio(upper: OcrLine, lower: OcrLine) -> float:
    """Overlap of the two x-intervals as a fraction of the upper line's width."""
    left = max(upper.bbox.x, lower.bbox.x)
    right = min(upper.bbox.x2, lower.bbox.x2)
    if right <= left:
        return 0.0
    return min(1.0, (right - left) / upper.bbox.width)


def build_line_adjacency(page: PageAnnotation, params: LayoutParams | None = None) -> list[tuple[str, str]]:
    """Undirected edge list over line ids; (upper_id, lower_id) per edge.

    Edge present iff 0 < baseline gap <= spacing_multiplier * median spacing
    and overlap ratio >= overlap_threshold. The geometric upper line (smaller
    baseline) is the overlap reference.
    """
    params = params or LayoutParams()
    if not page.lines:
        raise EmptyPage("page %d has no lines" % page.page_index)
    max_gap = params.spacing_multiplier * median_line_spacing(page)
    ordered = sorted(page.lines, key=lambda ln: (ln.baseline_y, ln.bbox.x, ln.line_id))
    edges: list[tuple[str, str]] = []
    for i, upper in enumerate(ordered):
        for lower in ordered[i + 1:]:
            gap = lower.baseline_y - upper.baseline_y
            if gap <= 0:
                continue
            if gap > max_gap:
                break  # ordered by baseline; gaps only grow
            if horizontal_overlap_ratio(upper, lower) >= params.overlap_threshold:
                edges.append((upper.line_id, lower.line_id))
    return edges


def _union_bbox(lines: list[OcrLine]) -> BoundingBox:
    x1 = min(ln.bbox.x for ln in lines)
    y1 = min(ln.bbox.y for ln in lines)
    x2 = max(ln.bbox.x2 for ln in lines)
    y2 = max(ln.bbox.y2 for ln in lines)
    return BoundingBox(x1, y1, x2 - x1, y2 - y1)


def group_paragraphs(page: PageAnnotation, params: LayoutParams | None = None,
                     direction: str = "ltr") -> list[Paragraph]:
    """Connected components of the line adjacency graph, in reading order.

    Within a paragraph, lines are ordered top-to-bottom by baseline; ties go
    leftmost-first for LTR pages and rightmost-first for RTL. Reading order
    across paragraphs is by union box top, then x in the same direction.
    """
    if direction not in ("ltr", "rtl"):
        raise ValueError("direction must be 'ltr' or 'rtl'")
    edges = build_line_adjacency(page, params)

    by_id = {ln.line_id: ln for ln in page.lines}
    adjacent: dict[str, list[str]] = {lid: [] for lid in by_id}
    for a, b in edges:
        adjacent[a].append(b)
        adjacent[b].append(a)

    xsign = 1.0 if direction == "ltr" else -1.0
    components: list[list[OcrLine]] = []
    seen: set[str] = set()
    for lid in sorted(by_id):
        if lid in seen:
            continue
        queue = deque([lid])
        seen.add(lid)
        members = []
        while queue:
            cur = queue.popleft()
            members.append(by_id[cur])
            for nxt in adjacent[cur]:
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        members.sort(key=lambda ln: (ln.baseline_y, xsign * ln.bbox.x, ln.line_id))
        components.append(members)

    boxed = [(_union_bbox(members), members) for members in components]
    boxed.sort(key=lambda item: (item[0].y, xsign * item[0].x))
    return [
        Paragraph(paragraph_id=i,
                  line_ids=tuple(ln.line_id for ln in members),
                  union_bbox=box,
                  reading_order=i)
        for i, (box, members) in enumerate(boxed)
    ]


def dump_layout_debug(page: PageAnnotation, params: LayoutParams | None = None,
                      direction: str = "ltr") -> str:
    """Line-oriented dump of edges and components, for diffing."""
    out = ["page %d" % page.page_index]
    for a, b in build_line_adjacency(page, params):
        out.append("edge %s %s" % (a, b))
    for para in group_paragraphs(page, params, direction):
        out.append("component %d: %s" % (para.paragraph_id, " ".join(para.line_ids)))
    return "\n".join(out) + "\n"
