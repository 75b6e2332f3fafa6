from .annotation import (ChartAnnotation, parse_annotation_text,
                         parse_chart_annotation, serialize_chart_annotation)
from .render import render_chart
from .spec import (CHART_TYPES, THEMES, ChartSpec, ChartStyle, Series,
                   generate_chart_spec, validate_chart_spec)

__all__ = [
    "CHART_TYPES", "THEMES", "ChartAnnotation", "ChartSpec", "ChartStyle",
    "Series", "generate_chart_spec", "parse_annotation_text",
    "parse_chart_annotation", "render_chart", "serialize_chart_annotation",
    "validate_chart_spec",
]
