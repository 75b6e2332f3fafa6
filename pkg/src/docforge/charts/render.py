"""Deterministic chart rendering to the shared draw plan.

Every chart embeds its data geometrically (bar heights, wedge angles,
point positions scale linearly with values), so vector output can be
introspected to recover the data. Class attributes on ops ("bar",
"wedge", "y-tick", ...) identify element roles without encoding values.
"""

from __future__ import annotations

import math
import statistics
import unicodedata

from ..errors import InvalidSpec, RenderFailure
from ..fonts import FontAsset, TextMeasurer, arabic_capable
from ..render.plan import (DrawCircle, DrawLine, DrawPolygon, DrawRect,
                           DrawText, DrawWedge, Plan)
from ..render.raster import plan_to_png
from ..render.style import RenderArtifact
from ..render.svg import plan_to_svg
from .annotation import serialize_chart_annotation
from .spec import ChartSpec, validate_chart_spec

WIDTH = 640.0
HEIGHT = 420.0
MARGIN_LEFT = 72.0
MARGIN_RIGHT = 36.0
MARGIN_RIGHT_DUAL = 72.0
MARGIN_TOP = 52.0
MARGIN_BOTTOM = 64.0

AXIS_COLOR = "#444444"
GRID_COLOR = "#dddddd"
TICK_FONT = 10.0
LABEL_FONT = 11.0
TITLE_FONT = 16.0


def _is_rtl(text: str) -> bool:
    return any(unicodedata.bidirectional(ch) in ("R", "AL") for ch in text)


def nice_ticks(lo: float, hi: float, target: int = 5) -> list[float]:
    """Round tick positions covering [lo, hi] at a 1/2/5 step."""
    if hi < lo:
        lo, hi = hi, lo
    if hi == lo:
        hi = lo + 1.0
    raw_step = (hi - lo) / max(1, target)
    mag = 10.0 ** math.floor(math.log10(raw_step))
    for mult in (1.0, 2.0, 5.0, 10.0):
        step = mag * mult
        if raw_step <= step:
            break
    start = math.floor(lo / step) * step
    ticks = []
    t = start
    while t < hi + step * 0.5:
        ticks.append(round(t, 10))
        t += step
    return ticks


class _Frame:
    """Cartesian plot area with a linear y scale."""

    def __init__(self, plan: Plan, lo: float, hi: float, right_axis: bool = False):
        self.plan = plan
        self.x0 = MARGIN_LEFT
        self.x1 = WIDTH - (MARGIN_RIGHT_DUAL if right_axis else MARGIN_RIGHT)
        self.y0 = MARGIN_TOP
        self.y1 = HEIGHT - MARGIN_BOTTOM
        ticks = nice_ticks(min(lo, 0.0) if lo > 0 else lo, hi)
        self.lo = ticks[0]
        self.hi = ticks[-1]
        self.ticks = ticks

    @property
    def width(self) -> float:
        return self.x1 - self.x0

    @property
    def height(self) -> float:
        return self.y1 - self.y0

    def y(self, value: float) -> float:
        frac = (value - self.lo) / (self.hi - self.lo)
        return self.y1 - frac * self.height


def _fmt_tick(value: float) -> str:
    if value == int(value):
        return str(int(value))
    return ("%.4f" % value).rstrip("0").rstrip(".")


def _draw_y_axis(plan: Plan, frame: _Frame, font: FontAsset, side: str = "left",
                 ticks: list[float] | None = None,
                 to_y=None, cls: str = "y-axis", tick_cls: str = "y-tick"):
    ticks = frame.ticks if ticks is None else ticks
    to_y = frame.y if to_y is None else to_y
    x = frame.x0 if side == "left" else frame.x1
    plan.add(DrawLine(x1=x, y1=frame.y0, x2=x, y2=frame.y1, color=AXIS_COLOR,
                      width=1.0, cls=cls))
    for t in ticks:
        y = to_y(t)
        if side == "left":
            plan.add(DrawLine(x1=frame.x0, y1=y, x2=frame.x1, y2=y,
                              color=GRID_COLOR, width=0.5, cls="grid"))
            plan.add(DrawText(x=x - 6, y=y + TICK_FONT * 0.35, text=_fmt_tick(t),
                              font=font, size=TICK_FONT, color=AXIS_COLOR,
                              anchor="end", cls=tick_cls))
        else:
            plan.add(DrawText(x=x + 6, y=y + TICK_FONT * 0.35, text=_fmt_tick(t),
                              font=font, size=TICK_FONT, color=AXIS_COLOR,
                              anchor="start", cls=tick_cls))


def _draw_x_axis(plan: Plan, frame: _Frame, font: FontAsset,
                 labels: list[str], centers: list[float], rotation: float):
    plan.add(DrawLine(x1=frame.x0, y1=frame.y1, x2=frame.x1, y2=frame.y1,
                      color=AXIS_COLOR, width=1.0, cls="x-axis"))
    for label, cx in zip(labels, centers):
        anchor = "middle" if not rotation else "end"
        plan.add(DrawText(x=cx, y=frame.y1 + LABEL_FONT * 1.4, text=label,
                          font=font, size=LABEL_FONT, color=AXIS_COLOR,
                          anchor=anchor, rotation=rotation,
                          direction="rtl" if _is_rtl(label) else None,
                          cls="x-tick"))


def _draw_title(plan: Plan, spec: ChartSpec, font: FontAsset):
    plan.add(DrawText(x=WIDTH / 2.0, y=MARGIN_TOP * 0.6, text=spec.title,
                      font=font, size=TITLE_FONT, color="#222222",
                      anchor="middle",
                      direction="rtl" if _is_rtl(spec.title) else None,
                      cls="title"))


def _draw_legend(plan: Plan, spec: ChartSpec, font: FontAsset, colors):
    if len(spec.series) < 2:
        return
    x = MARGIN_LEFT
    y = HEIGHT - 16.0
    for i, s in enumerate(spec.series):
        color = colors[i % len(colors)]
        plan.add(DrawRect(x=x, y=y - 8, width=10, height=10, fill=color, cls="legend-swatch"))
        plan.add(DrawText(x=x + 14, y=y, text=s.name, font=font, size=LABEL_FONT,
                          color="#333333", anchor="start",
                          direction="rtl" if _is_rtl(s.name) else None,
                          cls="legend-label"))
        x += 24 + len(s.name) * LABEL_FONT * 0.7


def _all_values(spec: ChartSpec) -> list[float]:
    return [v for s in spec.series for v in s.values]


def _category_centers(frame: _Frame, n: int) -> list[float]:
    slot = frame.width / n
    return [frame.x0 + slot * (i + 0.5) for i in range(n)]


# --- per-type painters -------------------------------------------------------


def _paint_pie(plan: Plan, spec: ChartSpec, font: FontAsset, colors, inner_ratio=0.0):
    values = spec.series[0].values
    total = sum(values)
    cx, cy = WIDTH / 2.0, (HEIGHT + MARGIN_TOP - MARGIN_BOTTOM) / 2.0 + 10
    r = min(WIDTH - MARGIN_LEFT - MARGIN_RIGHT,
            HEIGHT - MARGIN_TOP - MARGIN_BOTTOM) / 2.0 - 6
    inner = r * inner_ratio
    angle = -90.0
    for i, (label, value) in enumerate(zip(spec.categories, values)):
        span = 360.0 * value / total
        plan.add(DrawWedge(cx=cx, cy=cy, r=r, start_deg=angle, end_deg=angle + span,
                           fill=colors[i % len(colors)], inner_r=inner,
                           stroke="#ffffff", cls="wedge"))
        mid = math.radians(angle + span / 2.0)
        lx = cx + (r + 16) * math.cos(mid)
        ly = cy + (r + 16) * math.sin(mid)
        plan.add(DrawText(x=lx, y=ly, text=label, font=font, size=LABEL_FONT,
                          color="#333333",
                          anchor="start" if math.cos(mid) >= 0 else "end",
                          direction="rtl" if _is_rtl(label) else None,
                          cls="slice-label"))
        angle += span


def _paint_bars(plan: Plan, spec: ChartSpec, frame: _Frame, colors,
                grouped: bool):
    n = len(spec.categories)
    k = len(spec.series)
    centers = _category_centers(frame, n)
    slot = frame.width / n
    if grouped:
        bar_w = slot * 0.7 / k
        for i, cx in enumerate(centers):
            left = cx - bar_w * k / 2.0
            for j, s in enumerate(spec.series):
                v = s.values[i]
                y = frame.y(v)
                y0 = frame.y(0.0) if frame.lo <= 0 <= frame.hi else frame.y1
                top, height = (y, y0 - y) if y <= y0 else (y0, y - y0)
                plan.add(DrawRect(x=left + j * bar_w, y=top, width=bar_w,
                                  height=height, fill=colors[j % len(colors)],
                                  cls="bar"))
    else:
        bar_w = slot * 0.6
        for i, cx in enumerate(centers):
            stack_pos = 0.0
            for j, s in enumerate(spec.series):
                v = s.values[i]
                y_top = frame.y(stack_pos + v)
                y_bot = frame.y(stack_pos)
                plan.add(DrawRect(x=cx - bar_w / 2.0, y=y_top, width=bar_w,
                                  height=y_bot - y_top, fill=colors[j % len(colors)],
                                  cls="bar" if k == 1 else "bar-segment"))
                stack_pos += v
    return centers


def _paint_lines(plan: Plan, spec: ChartSpec, frame: _Frame, colors, as_area: bool):
    centers = _category_centers(frame, len(spec.categories))
    for j, s in enumerate(spec.series):
        color = colors[j % len(colors)]
        points = [(cx, frame.y(v)) for cx, v in zip(centers, s.values)]
        if as_area:
            poly = [(centers[0], frame.y(frame.lo if frame.lo > 0 else 0.0))] + points \
                + [(centers[-1], frame.y(frame.lo if frame.lo > 0 else 0.0))]
            plan.add(DrawPolygon(points=tuple(poly), fill=color, cls="area"))
        else:
            for a, b in zip(points, points[1:]):
                plan.add(DrawLine(x1=a[0], y1=a[1], x2=b[0], y2=b[1], color=color,
                                  width=2.0, cls="series-line"))
        for x, y in points:
            plan.add(DrawCircle(cx=x, cy=y, r=2.5, fill=color, cls="marker"))
    return centers


def _paint_dot(plan: Plan, spec: ChartSpec, frame: _Frame, colors):
    centers = _category_centers(frame, len(spec.categories))
    for cx, v in zip(centers, spec.series[0].values):
        plan.add(DrawLine(x1=cx, y1=frame.y1, x2=cx, y2=frame.y(v),
                          color=GRID_COLOR, width=1.0, cls="stem"))
        plan.add(DrawCircle(cx=cx, cy=frame.y(v), r=5.0, fill=colors[0], cls="dot"))
    return centers


def _paint_histogram(plan: Plan, spec: ChartSpec, font, colors, rotation):
    samples = sorted(spec.series[0].values)
    lo, hi = samples[0], samples[-1]
    if hi == lo:
        hi = lo + 1.0
    bins = 10
    width = (hi - lo) / bins
    counts = [0] * bins
    for v in samples:
        idx = min(bins - 1, int((v - lo) / width))
        counts[idx] += 1
    frame = _Frame(plan, 0.0, float(max(counts)))
    _draw_y_axis(plan, frame, font)
    slot = frame.width / bins
    for i, count in enumerate(counts):
        y = frame.y(float(count))
        plan.add(DrawRect(x=frame.x0 + i * slot, y=y, width=slot * 0.96,
                          height=frame.y1 - y, fill=colors[0], cls="bar"))
    edges = [lo + i * width for i in range(bins + 1)]
    labels = [_fmt_tick(round(e, 2)) for e in edges[::2]]
    centers = [frame.x0 + slot * i for i in range(0, bins + 1, 2)]
    _draw_x_axis(plan, frame, font, labels, centers, rotation)


def _quartiles(values) -> tuple[float, float, float]:
    qs = statistics.quantiles(values, n=4, method="inclusive")
    return qs[0], qs[1], qs[2]


def _paint_box(plan: Plan, spec: ChartSpec, frame: _Frame, colors):
    centers = _category_centers(frame, len(spec.series))
    slot = frame.width / len(spec.series)
    box_w = slot * 0.4
    for j, s in enumerate(spec.series):
        color = colors[j % len(colors)]
        q1, q2, q3 = _quartiles(s.values)
        iqr = q3 - q1
        lo_fence, hi_fence = q1 - 1.5 * iqr, q3 + 1.5 * iqr
        inside = [v for v in s.values if lo_fence <= v <= hi_fence]
        whisk_lo, whisk_hi = min(inside), max(inside)
        cx = centers[j]
        plan.add(DrawLine(x1=cx, y1=frame.y(whisk_lo), x2=cx, y2=frame.y(q1),
                          color=color, width=1.0, cls="whisker"))
        plan.add(DrawLine(x1=cx, y1=frame.y(q3), x2=cx, y2=frame.y(whisk_hi),
                          color=color, width=1.0, cls="whisker"))
        plan.add(DrawRect(x=cx - box_w / 2.0, y=frame.y(q3), width=box_w,
                          height=frame.y(q1) - frame.y(q3), fill="#ffffff",
                          stroke=color, stroke_width=1.5, cls="box"))
        plan.add(DrawLine(x1=cx - box_w / 2.0, y1=frame.y(q2), x2=cx + box_w / 2.0,
                          y2=frame.y(q2), color=color, width=2.0, cls="median"))
        for v in s.values:
            if v < lo_fence or v > hi_fence:
                plan.add(DrawCircle(cx=cx, cy=frame.y(v), r=2.0, fill=color,
                                    cls="outlier"))
    return centers


def _kde(values, points=40):
    n = len(values)
    mean = sum(values) / n
    var = sum((v - mean) ** 2 for v in values) / max(1, n - 1)
    sd = math.sqrt(var)
    bw = max(1e-6, 0.9 * min(sd if sd > 0 else 1.0,
                             _iqr(values) / 1.34 if _iqr(values) > 0 else sd or 1.0)
             * n ** (-0.2))
    lo = min(values) - 2 * bw
    hi = max(values) + 2 * bw
    xs = [lo + (hi - lo) * i / (points - 1) for i in range(points)]
    dens = []
    norm = 1.0 / (n * bw * math.sqrt(2 * math.pi))
    for x in xs:
        dens.append(norm * sum(math.exp(-0.5 * ((x - v) / bw) ** 2) for v in values))
    return xs, dens


def _iqr(values) -> float:
    q1, _, q3 = _quartiles(values)
    return q3 - q1


def _paint_violin(plan: Plan, spec: ChartSpec, frame: _Frame, colors):
    centers = _category_centers(frame, len(spec.series))
    slot = frame.width / len(spec.series)
    half_w = slot * 0.35
    for j, s in enumerate(spec.series):
        color = colors[j % len(colors)]
        xs, dens = _kde(list(s.values))
        peak = max(dens) or 1.0
        cx = centers[j]
        right = [(cx + half_w * d / peak, frame.y(x)) for x, d in zip(xs, dens)]
        left = [(cx - half_w * d / peak, frame.y(x)) for x, d in zip(reversed(xs), reversed(dens))]
        plan.add(DrawPolygon(points=tuple(right + left), fill=color, cls="violin"))
        q1, q2, q3 = _quartiles(s.values)
        plan.add(DrawLine(x1=cx, y1=frame.y(q1), x2=cx, y2=frame.y(q3),
                          color="#222222", width=2.0, cls="violin-iqr"))
        plan.add(DrawCircle(cx=cx, cy=frame.y(q2), r=2.5, fill="#ffffff",
                            stroke="#222222", cls="violin-median"))
    return centers


def _lerp_color(c1: str, c2: str, t: float) -> str:
    a = [int(c1[i:i + 2], 16) for i in (1, 3, 5)]
    b = [int(c2[i:i + 2], 16) for i in (1, 3, 5)]
    return "#%02x%02x%02x" % tuple(int(round(x + (y - x) * t)) for x, y in zip(a, b))


def _paint_heatmap(plan: Plan, spec: ChartSpec, font: FontAsset, colors, rotation):
    rows = len(spec.series)
    cols = len(spec.categories)
    x0, y0 = MARGIN_LEFT, MARGIN_TOP
    w = (WIDTH - MARGIN_LEFT - MARGIN_RIGHT) / cols
    h = (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM) / rows
    values = _all_values(spec)
    lo, hi = min(values), max(values)
    span = (hi - lo) or 1.0
    for r, s in enumerate(spec.series):
        for c, v in enumerate(s.values):
            t = (v - lo) / span
            plan.add(DrawRect(x=x0 + c * w, y=y0 + r * h, width=w, height=h,
                              fill=_lerp_color("#f5f5f5", colors[0], t),
                              stroke="#ffffff", cls="heat-cell"))
        plan.add(DrawText(x=x0 - 6, y=y0 + r * h + h / 2 + LABEL_FONT * 0.35,
                          text=s.name, font=font, size=LABEL_FONT, color=AXIS_COLOR,
                          anchor="end", direction="rtl" if _is_rtl(s.name) else None,
                          cls="row-label"))
    for c, label in enumerate(spec.categories):
        plan.add(DrawText(x=x0 + c * w + w / 2, y=y0 + rows * h + LABEL_FONT * 1.3,
                          text=label, font=font, size=LABEL_FONT, color=AXIS_COLOR,
                          anchor="middle" if not rotation else "end", rotation=rotation,
                          direction="rtl" if _is_rtl(label) else None, cls="x-tick"))


def _paint_xy(plan: Plan, spec: ChartSpec, font: FontAsset, colors, bubble: bool):
    xs = spec.series[0].values
    ys = spec.series[1].values
    x_ticks = nice_ticks(min(xs), max(xs))
    frame = _Frame(plan, min(ys), max(ys))
    frame_lo_x, frame_hi_x = x_ticks[0], x_ticks[-1]

    def to_x(v):
        return frame.x0 + (v - frame_lo_x) / (frame_hi_x - frame_lo_x or 1.0) * frame.width

    _draw_y_axis(plan, frame, font)
    plan.add(DrawLine(x1=frame.x0, y1=frame.y1, x2=frame.x1, y2=frame.y1,
                      color=AXIS_COLOR, width=1.0, cls="x-axis"))
    for t in x_ticks:
        plan.add(DrawText(x=to_x(t), y=frame.y1 + LABEL_FONT * 1.4, text=_fmt_tick(t),
                          font=font, size=TICK_FONT, color=AXIS_COLOR,
                          anchor="middle", cls="x-tick"))
    if bubble:
        sizes = spec.series[2].values
        peak = max(sizes)
        for x, y, s in zip(xs, ys, sizes):
            plan.add(DrawCircle(cx=to_x(x), cy=frame.y(y),
                                r=4.0 + 14.0 * math.sqrt(s / peak),
                                fill=colors[0], stroke="#ffffff", cls="bubble"))
    else:
        for x, y in zip(xs, ys):
            plan.add(DrawCircle(cx=to_x(x), cy=frame.y(y), r=3.0,
                                fill=colors[0], cls="point"))


def _paint_dual_axis(plan: Plan, spec: ChartSpec, font: FontAsset, colors, rotation):
    s_bar, s_line = spec.series
    frame = _Frame(plan, min(list(s_bar.values) + [0.0]), max(s_bar.values),
                   right_axis=True)
    _draw_y_axis(plan, frame, font, side="left")
    right_ticks = nice_ticks(min(list(s_line.values) + [0.0]), max(s_line.values))
    r_lo, r_hi = right_ticks[0], right_ticks[-1]

    def right_y(value):
        return frame.y1 - (value - r_lo) / (r_hi - r_lo) * frame.height

    _draw_y_axis(plan, frame, font, side="right", ticks=right_ticks, to_y=right_y,
                 cls="y-axis-right", tick_cls="y-tick-right")
    centers = _category_centers(frame, len(spec.categories))
    slot = frame.width / len(spec.categories)
    bar_w = slot * 0.55
    y0 = frame.y(0.0) if frame.lo <= 0 <= frame.hi else frame.y1
    for cx, v in zip(centers, s_bar.values):
        y = frame.y(v)
        top, height = (y, y0 - y) if y <= y0 else (y0, y - y0)
        plan.add(DrawRect(x=cx - bar_w / 2.0, y=top, width=bar_w, height=height,
                          fill=colors[0], cls="bar"))
    pts = [(cx, right_y(v)) for cx, v in zip(centers, s_line.values)]
    for a, b in zip(pts, pts[1:]):
        plan.add(DrawLine(x1=a[0], y1=a[1], x2=b[0], y2=b[1], color=colors[1],
                          width=2.0, cls="series-line"))
    for x, y in pts:
        plan.add(DrawCircle(cx=x, cy=y, r=2.5, fill=colors[1], cls="marker"))
    _draw_x_axis(plan, frame, font, list(spec.categories), centers, rotation)


# --- entry point ---------------------------------------------------------------


def render_chart(spec: ChartSpec, assets: list[FontAsset] | None = None,
                 measurer: TextMeasurer | None = None, raster: bool = False,
                 raster_scale: float = 1.0,
                 artifact_id: str = "chart") -> RenderArtifact:
    """Render a chart; sidecar is its serialized annotation."""
    validate_chart_spec(spec)
    from ..fonts import default_font_assets
    assets = list(assets) if assets else list(default_font_assets())
    arabic = arabic_capable(assets)
    if not arabic:
        raise RenderFailure("no Arabic-capable font available for chart labels")
    font = arabic[0]
    if spec.style.font_family == "mono":
        mono = [a for a in arabic if a.script_class == "mono"]
        if mono:
            font = mono[0]

    colors = spec.style.colors()
    rotation = spec.style.label_rotation
    plan = Plan(width=WIDTH, height=HEIGHT, background=spec.style.background)
    _draw_title(plan, spec, font)

    t = spec.chart_type
    if t in ("pie", "doughnut"):
        _paint_pie(plan, spec, font, colors, inner_ratio=0.55 if t == "doughnut" else 0.0)
    elif t in ("bar", "grouped_bar", "stacked_bar"):
        values = _all_values(spec)
        hi = max(values)
        if t == "stacked_bar":
            hi = max(sum(s.values[i] for s in spec.series)
                     for i in range(len(spec.categories)))
        frame = _Frame(plan, min(values + [0.0]), hi)
        _draw_y_axis(plan, frame, font)
        centers = _paint_bars(plan, spec, frame, colors, grouped=(t == "grouped_bar"))
        _draw_x_axis(plan, frame, font, list(spec.categories), centers, rotation)
    elif t in ("line", "area"):
        values = _all_values(spec)
        frame = _Frame(plan, min(values + [0.0]), max(values))
        _draw_y_axis(plan, frame, font)
        centers = _paint_lines(plan, spec, frame, colors, as_area=(t == "area"))
        _draw_x_axis(plan, frame, font, list(spec.categories), centers, rotation)
    elif t == "dot":
        values = _all_values(spec)
        frame = _Frame(plan, min(values + [0.0]), max(values))
        _draw_y_axis(plan, frame, font)
        centers = _paint_dot(plan, spec, frame, colors)
        _draw_x_axis(plan, frame, font, list(spec.categories), centers, rotation)
    elif t == "histogram":
        _paint_histogram(plan, spec, font, colors, rotation)
    elif t in ("box", "violin"):
        values = _all_values(spec)
        frame = _Frame(plan, min(values), max(values))
        _draw_y_axis(plan, frame, font)
        painter = _paint_box if t == "box" else _paint_violin
        centers = painter(plan, spec, frame, colors)
        _draw_x_axis(plan, frame, font, [s.name for s in spec.series], centers, rotation)
    elif t == "heatmap":
        _paint_heatmap(plan, spec, font, colors, rotation)
    elif t in ("scatter", "bubble"):
        _paint_xy(plan, spec, font, colors, bubble=(t == "bubble"))
    elif t == "dual_axis":
        _paint_dual_axis(plan, spec, font, colors, rotation)
    else:  # unreachable: validate_chart_spec rejects unknown types
        raise InvalidSpec("unknown chart type %r" % t)

    _draw_legend(plan, spec, font, colors)
    annotation = serialize_chart_annotation(spec)
    return RenderArtifact(
        artifact_id=artifact_id,
        ground_truth=annotation.text().encode("utf-8"),
        svg=plan_to_svg(plan),
        png=plan_to_png(plan, scale=raster_scale) if raster else None,
        meta={"chart_type": t, "theme": spec.style.theme},
    )
