"""Parse and validate line-level OCR annotation files into the document model.

Input schema (UTF-8 JSON):

    {"doc_id": str, "lang": str, "pages": [
        {"index": int, "w": int, "h": int, "background": str|null,
         "lines": [{"id": str, "text": str, "bbox": [x, y, w, h]}]}]}

Coordinates are absolute pixels of the source raster. IDL-style archives
carry the same information under different field names; map them into this
schema with :func:`document_from_raw_lines` (see README for the recipe).
"""

from __future__ import annotations

import json
import unicodedata
from dataclasses import dataclass

from .errors import GeometryError, MalformedInput, SchemaViolation


@dataclass(frozen=True)
class BoundingBox:
    """Axis-aligned box in page units; x/y is the top-left corner."""

    x: float
    y: float
    width: float
    height: float

    @property
    def x2(self) -> float:
        return self.x + self.width

    @property
    def y2(self) -> float:
        return self.y + self.height

    def shifted(self, dx: float, dy: float) -> "BoundingBox":
        return BoundingBox(self.x + dx, self.y + dy, self.width, self.height)


@dataclass(frozen=True)
class OcrLine:
    """One OCR line: opaque id, NFC text, box. Baseline is the box bottom."""

    line_id: str
    text: str
    bbox: BoundingBox

    @property
    def baseline_y(self) -> float:
        return self.bbox.y + self.bbox.height


@dataclass(frozen=True)
class PageAnnotation:
    page_index: int
    width: float
    height: float
    background_ref: str | None
    lines: tuple[OcrLine, ...]


@dataclass(frozen=True)
class DocumentAnnotation:
    doc_id: str
    pages: tuple[PageAnnotation, ...]
    source_language: str


@dataclass(frozen=True)
class Issue:
    """One validation finding; `rule` is a stable machine-readable code."""

    rule: str
    message: str
    line_id: str | None = None
    severity: str = "error"


def _require(cond: bool, message: str):
    if not cond:
        raise SchemaViolation(message)


def _as_number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaViolation("%s: expected number, got %r" % (where, value))
    return float(value)


def _parse_line(obj, page_w: float, page_h: float, where: str) -> OcrLine:
    _require(isinstance(obj, dict), "%s: line must be an object" % where)
    _require(isinstance(obj.get("id"), str), "%s: missing string field 'id'" % where)
    _require(isinstance(obj.get("text"), str), "%s: missing string field 'text'" % where)
    bbox = obj.get("bbox")
    _require(isinstance(bbox, list) and len(bbox) == 4,
             "%s: 'bbox' must be a 4-element array" % where)
    x, y, w, h = (_as_number(v, where + ".bbox") for v in bbox)
    if w <= 0 or h <= 0:
        raise GeometryError("%s: non-positive box size %gx%g" % (where, w, h))
    if x < 0 or y < 0:
        raise GeometryError("%s: negative box origin (%g, %g)" % (where, x, y))
    if x + w > page_w or y + h > page_h:
        raise GeometryError("%s: box [%g,%g,%g,%g] outside page %gx%g"
                            % (where, x, y, w, h, page_w, page_h))
    text = unicodedata.normalize("NFC", obj["text"])
    return OcrLine(line_id=obj["id"], text=text, bbox=BoundingBox(x, y, w, h))


def parse_ocr_annotations(raw: bytes | str, issues: list[Issue] | None = None) -> DocumentAnnotation:
    """Parse one annotation file; rejects rather than repairs bad geometry.

    Lines whose text is empty after trimming are dropped with a warning
    Issue (appended to `issues` when given) instead of failing the page.
    """
    if isinstance(raw, bytes):
        try:
            raw = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedInput("input is not valid UTF-8: %s" % exc) from exc
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise MalformedInput("input is not valid JSON: %s" % exc) from exc

    _require(isinstance(data, dict), "top level must be an object")
    _require(isinstance(data.get("doc_id"), str), "missing string field 'doc_id'")
    _require(isinstance(data.get("lang"), str), "missing string field 'lang'")
    _require(isinstance(data.get("pages"), list) and data["pages"],
             "'pages' must be a non-empty array")

    pages = []
    for pi, pobj in enumerate(data["pages"]):
        where = "pages[%d]" % pi
        _require(isinstance(pobj, dict), "%s: page must be an object" % where)
        _require(isinstance(pobj.get("index"), int) and not isinstance(pobj["index"], bool),
                 "%s: missing integer field 'index'" % where)
        _require(pobj["index"] == pi,
                 "%s: page index %r breaks contiguity (expected %d)" % (where, pobj["index"], pi))
        w = _as_number(pobj.get("w"), where + ".w")
        h = _as_number(pobj.get("h"), where + ".h")
        _require(w > 0 and h > 0, "%s: page size must be positive" % where)
        background = pobj.get("background")
        _require(background is None or isinstance(background, str),
                 "%s: 'background' must be string or null" % where)
        _require(isinstance(pobj.get("lines"), list), "%s: missing array field 'lines'" % where)

        lines = []
        seen_ids = set()
        for li, lobj in enumerate(pobj["lines"]):
            line = _parse_line(lobj, w, h, "%s.lines[%d]" % (where, li))
            if line.line_id in seen_ids:
                raise SchemaViolation("%s: duplicate line id %r" % (where, line.line_id))
            seen_ids.add(line.line_id)
            if not line.text.strip():
                if issues is not None:
                    issues.append(Issue(rule="empty-text", severity="warning",
                                        line_id=line.line_id,
                                        message="line %r dropped: empty text" % line.line_id))
                continue
            lines.append(line)
        pages.append(PageAnnotation(page_index=pi, width=w, height=h,
                                    background_ref=background, lines=tuple(lines)))

    return DocumentAnnotation(doc_id=data["doc_id"], pages=tuple(pages),
                              source_language=data["lang"])


def serialize_document(doc: DocumentAnnotation) -> str:
    """Inverse of parse: emits the input schema (round-trip stable)."""
    out = {
        "doc_id": doc.doc_id,
        "lang": doc.source_language,
        "pages": [
            {
                "index": p.page_index,
                "w": p.width,
                "h": p.height,
                "background": p.background_ref,
                "lines": [
                    {"id": ln.line_id, "text": ln.text,
                     "bbox": [ln.bbox.x, ln.bbox.y, ln.bbox.width, ln.bbox.height]}
                    for ln in p.lines
                ],
            }
            for p in doc.pages
        ],
    }
    return json.dumps(out, ensure_ascii=False, sort_keys=True)


def validate_page(page: PageAnnotation) -> list[Issue]:
    """Diagnostic re-check of all page invariants; empty list means valid."""
    issues: list[Issue] = []
    if page.width <= 0 or page.height <= 0:
        issues.append(Issue(rule="page-size", message="page size must be positive"))
        return issues
    seen: set[str] = set()
    for ln in page.lines:
        b = ln.bbox
        if ln.line_id in seen:
            issues.append(Issue(rule="duplicate-id", line_id=ln.line_id,
                                message="line id %r occurs more than once" % ln.line_id))
        seen.add(ln.line_id)
        if b.width <= 0 or b.height <= 0:
            issues.append(Issue(rule="box-size", line_id=ln.line_id,
                                message="non-positive box size %gx%g" % (b.width, b.height)))
            continue
        if b.x < 0 or b.y < 0 or b.x2 > page.width or b.y2 > page.height:
            issues.append(Issue(rule="box-bounds", line_id=ln.line_id,
                                message="box [%g,%g,%g,%g] outside page %gx%g"
                                        % (b.x, b.y, b.width, b.height, page.width, page.height)))
        if not ln.text.strip():
            issues.append(Issue(rule="empty-text", line_id=ln.line_id, severity="warning",
                                message="line %r has empty text" % ln.line_id))
    return issues


def document_from_raw_lines(doc_id: str, lang: str, pages) -> DocumentAnnotation:
    """Thin converter for IDL-style records.

    `pages` is an iterable of (width, height, background_or_None, lines)
    where each line is (line_id, text, x, y, w, h) in absolute pixels.
    Validation matches parse_ocr_annotations.
    """
    payload = {
        "doc_id": doc_id,
        "lang": lang,
        "pages": [
            {"index": i, "w": w, "h": h, "background": bg,
             "lines": [{"id": str(lid), "text": text, "bbox": [x, y, bw, bh]}
                       for (lid, text, x, y, bw, bh) in lines]}
            for i, (w, h, bg, lines) in enumerate(pages)
        ],
    }
    return parse_ocr_annotations(json.dumps(payload, ensure_ascii=False))
