"""Render table ground truth to the draw plan.

Layout is a pure function of (spec, content, measurer): column widths come
from measured cell text, row heights from font sizes. RTL tables place
logical column 0 rightmost. The artifact's sidecar is the canonical HTML.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import RenderFailure
from ..fonts import FontAsset, TextMeasurer, arabic_capable
from ..render.plan import DrawRect, DrawText, Plan
from ..render.raster import plan_to_png
from ..render.style import RenderArtifact
from ..render.svg import plan_to_svg
from ..rng import SeededRng
from .html import TableGroundTruth, cell_texts
from .spec import CellStyle, TableSpec, TableStyle, anchors

CELL_PAD = 6.0
MIN_COL_WIDTH = 42.0
MIN_ROW_HEIGHT = 22.0


@dataclass(frozen=True)
class TableLayout:
    width: float
    height: float
    cell_rects: dict  # (r, c) anchor -> (x, y, w, h)
    caption_rect: tuple | None  # (x, y, w, h) or None
    grid_top: float
    grid_height: float


def _style_for(spec: TableSpec, r: int, c: int) -> CellStyle:
    if spec.style_mode == "random" and spec.cell_styles:
        return spec.cell_styles[(r, c)]
    ts = spec.table_style or TableStyle(font_family="default", font_size=12,
                                        text_color="#000000",
                                        header_background="#dddddd")
    background = "#ffffff"
    if r < spec.header_rows or r >= spec.rows - spec.footer_rows:
        background = ts.header_background
    return CellStyle(font_family=ts.font_family, font_size=ts.font_size,
                     text_color=ts.text_color, background=background,
                     h_align="right" if spec.direction == "rtl" else "left",
                     v_align=ts.v_align)


def _resolve_font(family: str, assets: list[FontAsset], text: str) -> FontAsset:
    for asset in assets:
        if asset.family == family and asset.covers(text):
            return asset
    for asset in assets:
        if asset.covers(text):
            return asset
    return assets[0]


def compute_table_layout(spec: TableSpec, content: list[list[str]],
                         measurer: TextMeasurer, assets: list[FontAsset]) -> TableLayout:
    """Deterministic cell geometry for the given spec and content."""
    col_w = [MIN_COL_WIDTH] * spec.cols
    row_h = [MIN_ROW_HEIGHT] * spec.rows
    cells = anchors(spec)

    for r, c, rs, cs in cells:
        text = content[r][c]
        st = _style_for(spec, r, c)
        row_h[r] = max(row_h[r], st.font_size * 1.9)
        if not text:
            continue
        font = _resolve_font(st.font_family, assets, text)
        w, _ = measurer.measure(text, font, st.font_size)
        needed = w + 2 * CELL_PAD
        if cs == 1:
            col_w[c] = max(col_w[c], needed)

    # widen spanned columns that still cannot hold their merged content
    for r, c, rs, cs in cells:
        if cs <= 1 or not content[r][c]:
            continue
        st = _style_for(spec, r, c)
        font = _resolve_font(st.font_family, assets, content[r][c])
        w, _ = measurer.measure(content[r][c], font, st.font_size)
        needed = w + 2 * CELL_PAD
        span_w = sum(col_w[c:c + cs])
        if span_w < needed:
            extra = (needed - span_w) / cs
            for cc in range(c, c + cs):
                col_w[cc] += extra

    total_w = sum(col_w)
    caption_h = 0.0
    if spec.caption:
        cap_size = (spec.table_style.font_size if spec.table_style else 12) * 1.1
        caption_h = cap_size * 2.0
    grid_h = sum(row_h)
    grid_top = caption_h if (spec.caption and spec.caption_position == "top") else 0.0
    total_h = grid_h + caption_h

    x_off = [0.0]
    for w in col_w:
        x_off.append(x_off[-1] + w)
    y_off = [grid_top]
    for h in row_h:
        y_off.append(y_off[-1] + h)

    rects = {}
    for r, c, rs, cs in cells:
        w = x_off[c + cs] - x_off[c]
        h = y_off[r + rs] - y_off[r]
        if spec.direction == "rtl":
            x = total_w - x_off[c + cs]
        else:
            x = x_off[c]
        rects[(r, c)] = (x, y_off[r], w, h)

    caption_rect = None
    if spec.caption:
        cap_y = 0.0 if spec.caption_position == "top" else grid_top + grid_h
        caption_rect = (0.0, cap_y, total_w, caption_h)
    return TableLayout(width=total_w, height=total_h, cell_rects=rects,
                       caption_rect=caption_rect, grid_top=grid_top, grid_height=grid_h)


def render_table(gt: TableGroundTruth, spec: TableSpec, rng: SeededRng,
                 content: list[list[str]] | None = None,
                 assets: list[FontAsset] | None = None,
                 measurer: TextMeasurer | None = None,
                 raster: bool = False, raster_scale: float = 1.0,
                 artifact_id: str = "table") -> RenderArtifact:
    """Draw the grid with shading, gridlines and caption; sidecar = HTML.

    Content defaults to the texts embedded in the ground-truth HTML.
    """
    from ..fonts import default_font_assets
    assets = list(assets) if assets else list(default_font_assets())
    arabic = arabic_capable(assets)
    if arabic:
        assets = arabic + [a for a in assets if a not in arabic]
    measurer = measurer or _shared_measurer()

    if content is None:
        texts = cell_texts(gt.html)
        cells = anchors(spec)
        if len(texts) != len(cells):
            raise RenderFailure("ground truth cell count %d != spec %d"
                                % (len(texts), len(cells)))
        content = [["" for _ in range(spec.cols)] for _ in range(spec.rows)]
        for (r, c, _, _), text in zip(cells, texts):
            content[r][c] = text

    layout = compute_table_layout(spec, content, measurer, assets)
    plan = Plan(width=layout.width, height=layout.height, background="#ffffff")

    border = (spec.table_style.border_color if spec.table_style else "#555555")
    if spec.caption and layout.caption_rect:
        cx, cy, cw, ch = layout.caption_rect
        cap_style = _style_for(spec, spec.header_rows, 0)
        font = _resolve_font(cap_style.font_family, assets, spec.caption)
        plan.add(DrawText(x=cx + cw / 2.0, y=cy + ch * 0.65, text=spec.caption,
                          font=font, size=cap_style.font_size * 1.1,
                          color=cap_style.text_color, anchor="middle",
                          direction=spec.direction, cls="caption"))

    for (r, c, rs, cs) in anchors(spec):
        x, y, w, h = layout.cell_rects[(r, c)]
        st = _style_for(spec, r, c)
        plan.add(DrawRect(x=x, y=y, width=w, height=h, fill=st.background,
                          stroke=border, stroke_width=1.0, cls="cell"))
        text = content[r][c]
        if not text:
            continue
        font = _resolve_font(st.font_family, assets, text)
        if st.h_align == "left":
            tx, anchor = x + CELL_PAD, "start"
        elif st.h_align == "center":
            tx, anchor = x + w / 2.0, "middle"
        else:
            tx, anchor = x + w - CELL_PAD, "end"
        if st.v_align == "top":
            ty = y + st.font_size * 1.1
        elif st.v_align == "bottom":
            ty = y + h - st.font_size * 0.4
        else:
            ty = y + h / 2.0 + st.font_size * 0.35
        direction = "rtl" if spec.direction == "rtl" else "ltr"
        plan.add(DrawText(x=tx, y=ty, text=text, font=font, size=float(st.font_size),
                          color=st.text_color, anchor=anchor, direction=direction,
                          cls="cell-text"))

    return RenderArtifact(
        artifact_id=artifact_id,
        ground_truth=gt.html.encode("utf-8"),
        svg=plan_to_svg(plan),
        png=plan_to_png(plan, scale=raster_scale) if raster else None,
        meta={"rows": spec.rows, "cols": spec.cols, "mode": spec.style_mode},
    ).stamp(rng)


_MEASURER: TextMeasurer | None = None


def _shared_measurer() -> TextMeasurer:
    global _MEASURER
    if _MEASURER is None:
        _MEASURER = TextMeasurer()
    return _MEASURER
