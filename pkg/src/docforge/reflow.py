"""Redistribute translated text into the original line boxes.

Words are dealt greedily into boxes in reading order, proportionally to
box width; each segment is then size-fitted into its box, and direction
is enforced with Unicode bidi isolates (U+2066..U+2069) rather than
legacy embeddings. Shaping itself is left to the rendering layer.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, replace

from .errors import Overflow, OverflowUnsplittable
from .fonts import FontAsset, TextMeasurer, select_font  # noqa: F401 - select_font re-exported
from .ingest import BoundingBox, OcrLine
from .layout import Paragraph

LRI = "\u2066"
RLI = "\u2067"
FSI = "\u2068"
PDI = "\u2069"

MIN_FONT_SIZE = 6.0
MAX_FONT_SIZE = 72.0
SIZE_STEP = 0.25
BOX_PADDING = 0.02


@dataclass(frozen=True)
class LineAssignment:
    """One box's share of the translated paragraph.

    font_size is None until fit_to_box has run; afterwards the segment is
    guaranteed to render within the box at that size.
    """

    line_id: str
    segment: str
    direction: str = "rtl"
    font: FontAsset | None = None
    font_size: float | None = None
    alignment: str = "right"


def allocate_segments(paragraph: Paragraph, lines: list[OcrLine], translated: str,
                      font: FontAsset | None = None,
                      measurer: TextMeasurer | None = None,
                      direction: str = "rtl", alignment: str | None = None,
                      min_size: float = MIN_FONT_SIZE) -> list[LineAssignment]:
    """Split translated text across the paragraph's boxes at word boundaries.

    Greedy fill in reading order: each box takes words until its share of
    the total estimated width is reached; the last box takes the rest.
    Joining the non-empty segments with single spaces reproduces the
    (whitespace-normalized) input. Words are never split across boxes.

    With a font and measurer, raises OverflowUnsplittable when some single
    word cannot fit even the widest box at the minimum size.
    """
    if not translated.strip():
        raise ValueError("translated text must be non-empty")
    by_id = {ln.line_id: ln for ln in lines}
    boxes = [by_id[lid].bbox for lid in paragraph.line_ids]
    if not boxes:
        raise ValueError("paragraph has no lines")

    words = translated.split()
    if font is not None and measurer is not None:
        widths = [measurer.measure(w, font, 1.0)[0] for w in words]
        widest_box = max(b.width for b in boxes)
        usable = widest_box * (1.0 - BOX_PADDING)
        for word, w in zip(words, widths):
            if w * min_size > usable:
                raise OverflowUnsplittable(
                    "word %r needs %.1f units at minimum size; widest box offers %.1f"
                    % (word, w * min_size, usable))
    else:
        widths = [float(len(w)) for w in words]

    total_text = sum(widths)
    total_box = sum(b.width for b in boxes)
    if alignment is None:
        alignment = "right" if direction == "rtl" else "left"

    segments: list[list[str]] = []
    k = 0
    cum = 0.0
    cum_share = 0.0
    for j, box in enumerate(boxes):
        if j == len(boxes) - 1:
            segments.append(words[k:])
            k = len(words)
            break
        cum_share += box.width / total_box
        target = total_text * cum_share
        seg: list[str] = []
        while k < len(words):
            if seg and cum + widths[k] > target + 1e-9:
                break
            seg.append(words[k])
            cum += widths[k]
            k += 1
        segments.append(seg)

    return [
        LineAssignment(line_id=lid, segment=" ".join(seg), direction=direction,
                       font=font, alignment=alignment)
        for lid, seg in zip(paragraph.line_ids, segments)
    ]


def fit_to_box(segment: str, box: BoundingBox, font: FontAsset,
               measurer: TextMeasurer | None = None,
               min_size: float = MIN_FONT_SIZE, max_size: float = MAX_FONT_SIZE) -> float:
    """Largest size on the quarter-point grid whose extent fits the box.

    The box keeps a 2% padding margin on both axes. Binary search over the
    grid; measurement is monotone in size by construction. Raises Overflow
    when even min_size does not fit.
    """
    if min_size > max_size:
        raise ValueError("min_size must not exceed max_size")
    measurer = measurer or _default_measurer()
    limit_w = box.width * (1.0 - BOX_PADDING)
    limit_h = box.height * (1.0 - BOX_PADDING)

    def fits(size: float) -> bool:
        w, h = measurer.measure(segment, font, size)
        return w <= limit_w and h <= limit_h

    steps = int(round((max_size - min_size) / SIZE_STEP))
    lo, hi = 0, steps
    if not fits(min_size):
        raise Overflow("segment %r does not fit %gx%g at %gpt"
                       % (segment[:40], box.width, box.height, min_size))
    if fits(max_size):
        return max_size
    # invariant: fits(lo), not fits(hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if fits(min_size + mid * SIZE_STEP):
            lo = mid
        else:
            hi = mid
    return min_size + lo * SIZE_STEP


_MEASURER: TextMeasurer | None = None


def _default_measurer() -> TextMeasurer:
    global _MEASURER
    if _MEASURER is None:
        _MEASURER = TextMeasurer()
    return _MEASURER


def fit_assignment(assignment: LineAssignment, box: BoundingBox,
                   measurer: TextMeasurer | None = None,
                   min_size: float = MIN_FONT_SIZE,
                   max_size: float = MAX_FONT_SIZE) -> LineAssignment:
    """fit_to_box applied to an allocated assignment; empty segments get min_size."""
    if assignment.font is None:
        raise ValueError("assignment has no font")
    if not assignment.segment:
        return replace(assignment, font_size=min_size)
    size = fit_to_box(assignment.segment, box, assignment.font, measurer,
                      min_size=min_size, max_size=max_size)
    return replace(assignment, font_size=size)


# --- bidi isolates ---------------------------------------------------------

# Character classes that can form an embedded opposite-direction run.
_LTR_CORE = {"L", "EN"}
_RTL_CORE = {"R", "AL", "AN"}
_RUN_EXTENDERS = {"ES", "ET", "CS"}


def _opposite_runs(text: str, direction: str) -> list[tuple[int, int]]:
    """Maximal [start, end) runs needing their own isolate pair.

    A run is a block of core + extender characters containing at least one
    core character; core means strong-LTR/European-digit inside RTL text,
    or strong-RTL/Arabic-digit inside LTR text.
    """
    core = _LTR_CORE if direction == "rtl" else _RTL_CORE
    runs = []
    start = None
    has_core = False
    for i, ch in enumerate(text):
        cls = unicodedata.bidirectional(ch)
        if cls in core or cls in _RUN_EXTENDERS:
            if start is None:
                start = i
                has_core = False
            if cls in core:
                has_core = True
        else:
            if start is not None and has_core:
                runs.append((start, i))
            start = None
    if start is not None and has_core:
        runs.append((start, len(text)))
    return runs


def apply_bidi_controls(text: str, direction: str) -> str:
    """Wrap text in a direction isolate; embedded opposite-direction runs
    (digit runs, Latin tokens inside Arabic, and vice versa) each get their
    own inner isolate. Nesting depth never exceeds 2."""
    if direction not in ("ltr", "rtl"):
        raise ValueError("direction must be 'ltr' or 'rtl'")
    outer_open = RLI if direction == "rtl" else LRI
    inner_open = LRI if direction == "rtl" else RLI
    parts = []
    cursor = 0
    for start, end in _opposite_runs(text, direction):
        parts.append(text[cursor:start])
        parts.append(inner_open + text[start:end] + PDI)
        cursor = end
    parts.append(text[cursor:])
    return outer_open + "".join(parts) + PDI


def isolates_balanced(text: str) -> bool:
    """Stack-discipline check: every PDI closes one isolate initiator."""
    depth = 0
    for ch in text:
        if ch in (LRI, RLI, FSI):
            depth += 1
        elif ch == PDI:
            depth -= 1
            if depth < 0:
                return False
    return depth == 0


def strip_bidi_controls(text: str) -> str:
    return "".join(ch for ch in text if ch not in (LRI, RLI, FSI, PDI))
