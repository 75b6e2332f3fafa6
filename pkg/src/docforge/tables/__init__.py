from .html import (TableGroundTruth, cell_texts, parse_table_grid,
                   replace_cell_texts, table_to_html)
from .latex import count_columns, latex_table_to_html
from .normalize import KEEP_TAGS, normalize_table_html
from .render import TableLayout, compute_table_layout, render_table
from .spec import (CONSISTENT_DIMS, RANDOM_DIMS, STYLE_MODES, CellStyle,
                   ContentPolicy, MergeSpan, TableSpec, TableStyle, anchors,
                   generate_table_content, generate_table_spec, logical_grid,
                   validate_table_spec)

__all__ = [
    "CONSISTENT_DIMS", "CellStyle", "ContentPolicy", "KEEP_TAGS", "MergeSpan",
    "RANDOM_DIMS", "STYLE_MODES", "TableGroundTruth", "TableLayout",
    "TableSpec", "TableStyle", "anchors", "cell_texts", "compute_table_layout",
    "count_columns", "generate_table_content", "generate_table_spec",
    "latex_table_to_html", "logical_grid", "normalize_table_html",
    "parse_table_grid", "render_table", "replace_cell_texts", "table_to_html",
    "validate_table_spec",
]
