import json

import pytest

from docforge.errors import GeometryError, MalformedInput, SchemaViolation
from docforge.ingest import (Issue, document_from_raw_lines, parse_ocr_annotations,
                             serialize_document, validate_page)

from conftest import make_line, make_page


def doc_json(pages):
    return json.dumps({"doc_id": "d1", "lang": "en", "pages": pages})


def simple_page(index=0, lines=None):
    if lines is None:
        lines = [{"id": "l0", "text": "abc", "bbox": [10, 10, 100, 20]}]
    return {"index": index, "w": 800, "h": 600, "background": None, "lines": lines}


def test_parse_single_line_baseline():
    doc = parse_ocr_annotations(doc_json([simple_page()]))
    assert len(doc.pages) == 1
    page = doc.pages[0]
    assert len(page.lines) == 1
    line = page.lines[0]
    assert line.text == "abc"
    assert line.baseline_y == 30  # box bottom: y + height


def test_parse_rejects_zero_width():
    raw = doc_json([simple_page(lines=[{"id": "l0", "text": "x", "bbox": [10, 10, 0, 20]}])])
    with pytest.raises(GeometryError):
        parse_ocr_annotations(raw)


def test_parse_rejects_box_outside_page():
    raw = doc_json([simple_page(lines=[{"id": "l0", "text": "x", "bbox": [750, 10, 100, 20]}])])
    with pytest.raises(GeometryError):
        parse_ocr_annotations(raw)


def test_parse_three_page_fixture_counts():
    pages = []
    for pi, count in enumerate([7, 5, 9]):
        lines = [{"id": "p%d-l%d" % (pi, li), "text": "t%d" % li,
                  "bbox": [10, 10 + 25 * li, 100, 20]} for li in range(count)]
        pages.append(simple_page(index=pi, lines=lines))
    doc = parse_ocr_annotations(doc_json(pages))
    assert [p.page_index for p in doc.pages] == [0, 1, 2]
    assert [len(p.lines) for p in doc.pages] == [7, 5, 9]


def test_parse_rejects_noncontiguous_page_index():
    raw = doc_json([simple_page(index=1)])
    with pytest.raises(SchemaViolation):
        parse_ocr_annotations(raw)


def test_parse_rejects_duplicate_line_ids():
    lines = [{"id": "l0", "text": "a", "bbox": [10, 10, 50, 20]},
             {"id": "l0", "text": "b", "bbox": [10, 40, 50, 20]}]
    with pytest.raises(SchemaViolation):
        parse_ocr_annotations(doc_json([simple_page(lines=lines)]))


def test_parse_rejects_garbage():
    with pytest.raises(MalformedInput):
        parse_ocr_annotations(b"\xff\xfe garbage")
    with pytest.raises(MalformedInput):
        parse_ocr_annotations("not json {")
    with pytest.raises(SchemaViolation):
        parse_ocr_annotations(json.dumps({"doc_id": "d", "lang": "en"}))


def test_parse_nfc_normalizes_text():
    decomposed = "أ"  # alef + hamza above composes to U+0623
    lines = [{"id": "l0", "text": decomposed, "bbox": [0, 0, 50, 20]}]
    doc = parse_ocr_annotations(doc_json([simple_page(lines=lines)]))
    assert doc.pages[0].lines[0].text == "أ"


def test_parse_drops_empty_lines_with_warning():
    lines = [{"id": "l0", "text": "  ", "bbox": [0, 0, 50, 20]},
             {"id": "l1", "text": "ok", "bbox": [0, 30, 50, 20]}]
    issues: list[Issue] = []
    doc = parse_ocr_annotations(doc_json([simple_page(lines=lines)]), issues=issues)
    assert [ln.line_id for ln in doc.pages[0].lines] == ["l1"]
    assert len(issues) == 1 and issues[0].severity == "warning"


def test_serialize_parse_round_trip():
    pages = [simple_page(index=0, lines=[
        {"id": "l0", "text": "نص عربي", "bbox": [10, 10, 200, 24]},
        {"id": "l1", "text": "second", "bbox": [10.5, 44.25, 180.0, 22.0]},
    ])]
    doc = parse_ocr_annotations(doc_json(pages))
    again = parse_ocr_annotations(serialize_document(doc))
    assert again == doc


def test_validate_page_clean():
    page = make_page([make_line(0, 10, 10, 100, 20), make_line(1, 10, 40, 100, 20)])
    assert validate_page(page) == []


def test_validate_page_duplicate_id():
    page = make_page([make_line("a", 10, 10, 100, 20), make_line("a", 10, 40, 100, 20)])
    issues = validate_page(page)
    assert len(issues) == 1
    assert issues[0].rule == "duplicate-id"


def test_validate_page_three_injected_violations():
    page = make_page([
        make_line(0, 10, 10, 100, 20),                # clean
        make_line(1, 10, 40, -5, 20),                 # bad size
        make_line(2, 990, 70, 100, 20),               # out of bounds
        make_line(3, 10, 100, 100, 20, text="   "),   # empty text
    ])
    issues = validate_page(page)
    assert len(issues) == 3
    assert {i.rule for i in issues} == {"box-size", "box-bounds", "empty-text"}


def test_document_from_raw_lines_converter():
    doc = document_from_raw_lines("idl-0001", "en", [
        (800, 600, None, [("w0", "hello", 10, 10, 60, 14)]),
    ])
    assert doc.doc_id == "idl-0001"
    assert doc.pages[0].lines[0].baseline_y == 24
