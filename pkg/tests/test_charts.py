import math
import re
import xml.etree.ElementTree as ET
from collections import Counter

import pytest

from docforge.charts import (CHART_TYPES, ChartSpec, Series, generate_chart_spec,
                             parse_chart_annotation, render_chart,
                             serialize_chart_annotation, validate_chart_spec)
from docforge.errors import InvalidSpec
from docforge.rng import SeededRng

SVG_NS = "{http://www.w3.org/2000/svg}"


def svg_elements(svg, tag, cls=None):
    root = ET.fromstring(svg)
    out = []
    for el in root.iter(SVG_NS + tag):
        if cls is None or el.get("class") == cls:
            out.append(el)
    return out


def spec_for(chart_type, seed=0):
    return generate_chart_spec(chart_type, SeededRng(1000 + seed, seed))


# --- spec generation --------------------------------------------------------

def test_forced_pie_shape():
    spec = spec_for("pie")
    assert spec.chart_type == "pie"
    assert len(spec.series) == 1
    assert all(v >= 0 for v in spec.series[0].values)


def test_all_types_generate_valid_specs():
    rng = SeededRng(2, 2)
    for t in CHART_TYPES:
        for i in range(20):
            spec = generate_chart_spec(t, rng)
            validate_chart_spec(spec)


def test_type_frequencies_uniform():
    rng = SeededRng(3, 3)
    counts = Counter(generate_chart_spec(None, rng).chart_type for _ in range(15_000))
    assert set(counts) == set(CHART_TYPES)
    for t in CHART_TYPES:
        assert abs(counts[t] / 15_000 - 1 / 15) <= 0.01


def test_fixed_seed_reproducible():
    a = generate_chart_spec(None, SeededRng(4, 4))
    b = generate_chart_spec(None, SeededRng(4, 4))
    assert a == b


def test_shape_validation_rejects_bad_specs():
    with pytest.raises(InvalidSpec):
        validate_chart_spec(ChartSpec("pie", "t", (Series("v", (1.0, -2.0)),),
                                      ("a", "b")))
    with pytest.raises(InvalidSpec):
        validate_chart_spec(ChartSpec("dual_axis", "t", (Series("v", (1.0,)),),
                                      ("a",)))
    with pytest.raises(InvalidSpec):
        validate_chart_spec(ChartSpec("heatmap", "t",
                                      (Series("r1", (1.0, 2.0)), Series("r2", (1.0,))),
                                      ("a", "b")))
    with pytest.raises(InvalidSpec):
        validate_chart_spec(ChartSpec("scatter", "t",
                                      (Series("x", (1.0,)), Series("y", (1.0, 2.0))),
                                      None))


# --- annotation round trip -----------------------------------------------------

def test_annotation_layout_pie():
    spec = ChartSpec("pie", "حصص السوق",
                     (Series("value", (1.0, 2.0)),), ("A", "B"))
    ann = serialize_chart_annotation(spec)
    assert ann.text() == ("title: حصص السوق\ntype: pie\n"
                          "label,value\nA,1\nB,2")


def test_annotation_quotes_commas_in_labels():
    spec = ChartSpec("bar", "t", (Series("value", (5.0,)),), ("a, b",))
    ann = serialize_chart_annotation(spec)
    assert '"a, b"' in ann.table
    parsed = parse_chart_annotation(ann.text())
    assert parsed.categories == ("a, b",)


def test_annotation_round_trip_all_types():
    rng = SeededRng(7, 7)
    for i in range(1000):
        spec = generate_chart_spec(None, rng)
        parsed = parse_chart_annotation(serialize_chart_annotation(spec).text())
        assert parsed.title == spec.title
        assert parsed.chart_type == spec.chart_type
        assert parsed.categories == spec.categories
        assert parsed.series == spec.series


# --- rendering: vector introspection ---------------------------------------------

_WEDGE_RE = re.compile(
    r"M (?P<cx>-?[\d.]+) (?P<cy>-?[\d.]+) L (?P<x1>-?[\d.]+) (?P<y1>-?[\d.]+) "
    r"A [\d.]+ [\d.]+ 0 (?P<large>[01]) 1 (?P<x2>-?[\d.]+) (?P<y2>-?[\d.]+) Z")


def wedge_spans(svg):
    spans = []
    for el in svg_elements(svg, "path", cls="wedge"):
        m = _WEDGE_RE.match(el.get("d"))
        assert m, "wedge path %r not in pie form" % el.get("d")
        cx, cy = float(m["cx"]), float(m["cy"])
        a1 = math.degrees(math.atan2(float(m["y1"]) - cy, float(m["x1"]) - cx))
        a2 = math.degrees(math.atan2(float(m["y2"]) - cy, float(m["x2"]) - cx))
        span = (a2 - a1) % 360.0
        if span == 0.0:
            span = 360.0
        large = m["large"] == "1"
        assert large == (span > 180.0), "large-arc flag inconsistent with span"
        spans.append(span)
    return spans


def test_pie_fixture_angles():
    spec = ChartSpec("pie", "t", (Series("value", (1.0, 1.0, 2.0)),),
                     ("a", "b", "c"))
    art = render_chart(spec)
    spans = wedge_spans(art.svg)
    assert len(spans) == 3
    for got, want in zip(spans, (90.0, 90.0, 180.0)):
        assert abs(got - want) <= 0.1


def test_pie_angles_proportional_random():
    rng = SeededRng(8, 8)
    for _ in range(20):
        spec = generate_chart_spec("pie", rng)
        art = render_chart(spec)
        values = spec.series[0].values
        total = sum(values)
        spans = wedge_spans(art.svg)
        assert len(spans) == len(values)
        for got, v in zip(spans, values):
            assert abs(got - 360.0 * v / total) <= 0.1


def test_doughnut_has_annular_wedges():
    spec = spec_for("doughnut")
    art = render_chart(spec)
    paths = svg_elements(art.svg, "path", cls="wedge")
    assert paths
    for el in paths:
        assert el.get("d").count("A") == 2  # outer + inner arc


def test_dual_axis_has_two_value_axes():
    spec = spec_for("dual_axis")
    art = render_chart(spec)
    left = svg_elements(art.svg, "line", cls="y-axis")
    right = svg_elements(art.svg, "line", cls="y-axis-right")
    assert len(left) == 1 and len(right) == 1
    assert svg_elements(art.svg, "text", cls="y-tick")
    assert svg_elements(art.svg, "text", cls="y-tick-right")


def _axis_scale(svg, tick_cls="y-tick"):
    """Linear value->pixel map recovered from two tick labels."""
    ticks = [(float(el.text), float(el.get("y"))) for el in
             svg_elements(svg, "text", cls=tick_cls)]
    assert len(ticks) >= 2
    (v1, y1), (v2, y2) = ticks[0], ticks[-1]
    slope = (y2 - y1) / (v2 - v1)

    def y_to_value(y):
        return v1 + (y - y1) / slope
    return y_to_value


def test_bar_heights_recoverable_within_half_percent():
    spec = ChartSpec("bar", "t", (Series("value", (12.5, 40.0, 77.25, 95.0)),),
                     ("a", "b", "c", "d"))
    art = render_chart(spec)
    to_value = _axis_scale(art.svg)
    bars = svg_elements(art.svg, "rect", cls="bar")
    assert len(bars) == 4
    # tick baseline y: value at bar bottom
    for bar, expected in zip(bars, spec.series[0].values):
        top = float(bar.get("y"))
        bottom = top + float(bar.get("height"))
        got = to_value(top) - to_value(bottom)
        assert abs(got - expected) / expected <= 0.005


def test_stacked_bar_segments_proportional():
    spec = ChartSpec("stacked_bar", "t",
                     (Series("s1", (10.0, 20.0)), Series("s2", (30.0, 40.0))),
                     ("a", "b"))
    art = render_chart(spec)
    to_value = _axis_scale(art.svg)
    segments = svg_elements(art.svg, "rect", cls="bar-segment")
    assert len(segments) == 4
    heights = [to_value(float(s.get("y"))) -
               to_value(float(s.get("y")) + float(s.get("height")))
               for s in segments]
    expected = [10.0, 30.0, 20.0, 40.0]  # per category, bottom-up
    for got, want in zip(heights, expected):
        assert abs(got - want) / want <= 0.005


def test_every_type_renders_with_sidecar_equal_to_annotation():
    rng = SeededRng(9, 9)
    for t in CHART_TYPES:
        spec = generate_chart_spec(t, rng)
        art = render_chart(spec)
        assert art.svg.startswith("<svg")
        assert art.ground_truth.decode("utf-8") == serialize_chart_annotation(spec).text()


def test_render_deterministic():
    spec = spec_for("line", seed=5)
    a = render_chart(spec, raster=True)
    b = render_chart(spec, raster=True)
    assert a.svg == b.svg and a.png == b.png


def test_label_rotation_emitted():
    rng = SeededRng(10, 10)
    spec = None
    while spec is None or spec.style.label_rotation == 0.0:
        spec = generate_chart_spec("bar", rng)
    art = render_chart(spec)
    assert "rotate(" in art.svg
