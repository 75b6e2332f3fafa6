"""Serialize a draw plan as standalone SVG (the canonical vector artifact).

Output is deterministic: fixed attribute order, fixed number formatting,
no timestamps.
"""

from __future__ import annotations

import base64
import html
import math

from .plan import (DrawCircle, DrawImage, DrawLine, DrawPolygon, DrawRect,
                   DrawText, DrawWedge, Plan)


def _fmt(value: float) -> str:
    s = "%.3f" % float(value)
    s = s.rstrip("0").rstrip(".")
    return s if s not in ("", "-0") else "0"


def _cls(op) -> str:
    return ' class="%s"' % op.cls if getattr(op, "cls", None) else ""


def _polar(cx: float, cy: float, r: float, deg: float) -> tuple[float, float]:
    rad = math.radians(deg)
    return cx + r * math.cos(rad), cy + r * math.sin(rad)


def wedge_path(op: DrawWedge) -> str:
    """SVG path for a pie or annulus sector; angles clockwise, y-down."""
    span = (op.end_deg - op.start_deg) % 360.0
    if span == 0 and op.end_deg != op.start_deg:
        span = 360.0
    large = 1 if span > 180.0 else 0
    x1, y1 = _polar(op.cx, op.cy, op.r, op.start_deg)
    x2, y2 = _polar(op.cx, op.cy, op.r, op.end_deg)
    if op.inner_r <= 0:
        return "M %s %s L %s %s A %s %s 0 %d 1 %s %s Z" % (
            _fmt(op.cx), _fmt(op.cy), _fmt(x1), _fmt(y1),
            _fmt(op.r), _fmt(op.r), large, _fmt(x2), _fmt(y2))
    x3, y3 = _polar(op.cx, op.cy, op.inner_r, op.end_deg)
    x4, y4 = _polar(op.cx, op.cy, op.inner_r, op.start_deg)
    return ("M %s %s A %s %s 0 %d 1 %s %s L %s %s A %s %s 0 %d 0 %s %s Z" % (
        _fmt(x1), _fmt(y1), _fmt(op.r), _fmt(op.r), large, _fmt(x2), _fmt(y2),
        _fmt(x3), _fmt(y3), _fmt(op.inner_r), _fmt(op.inner_r), large,
        _fmt(x4), _fmt(y4)))


def _text_attrs(op: DrawText) -> str:
    anchor = {"start": "start", "middle": "middle", "end": "end"}[op.anchor]
    attrs = [
        'x="%s"' % _fmt(op.x), 'y="%s"' % _fmt(op.y),
        'font-family="%s"' % html.escape(op.font.family, quote=True),
        'font-size="%s"' % _fmt(op.size),
        'fill="%s"' % op.color,
        'text-anchor="%s"' % anchor,
    ]
    if op.direction == "rtl":
        attrs.append('direction="rtl"')
    if op.rotation:
        attrs.append('transform="rotate(%s %s %s)"' % (_fmt(op.rotation), _fmt(op.x), _fmt(op.y)))
    return " ".join(attrs)


def _shape_style(fill, stroke, stroke_width) -> str:
    parts = ['fill="%s"' % (fill if fill else "none")]
    if stroke:
        parts.append('stroke="%s"' % stroke)
        parts.append('stroke-width="%s"' % _fmt(stroke_width))
    return " ".join(parts)


def plan_to_svg(plan: Plan) -> str:
    w, h = _fmt(plan.width), _fmt(plan.height)
    out = ['<svg xmlns="http://www.w3.org/2000/svg" width="%s" height="%s" '
           'viewBox="0 0 %s %s">' % (w, h, w, h)]
    if plan.background:
        out.append('<rect x="0" y="0" width="%s" height="%s" fill="%s"/>'
                   % (w, h, plan.background))
    for op in plan.ops:
        if isinstance(op, DrawRect):
            out.append('<rect%s x="%s" y="%s" width="%s" height="%s" %s/>' % (
                _cls(op), _fmt(op.x), _fmt(op.y), _fmt(op.width), _fmt(op.height),
                _shape_style(op.fill, op.stroke, op.stroke_width)))
        elif isinstance(op, DrawLine):
            out.append('<line%s x1="%s" y1="%s" x2="%s" y2="%s" stroke="%s" '
                       'stroke-width="%s"/>' % (
                           _cls(op), _fmt(op.x1), _fmt(op.y1), _fmt(op.x2), _fmt(op.y2),
                           op.color, _fmt(op.width)))
        elif isinstance(op, DrawPolygon):
            pts = " ".join("%s,%s" % (_fmt(x), _fmt(y)) for x, y in op.points)
            out.append('<polygon%s points="%s" %s/>' % (
                _cls(op), pts, _shape_style(op.fill, op.stroke, op.stroke_width)))
        elif isinstance(op, DrawCircle):
            out.append('<circle%s cx="%s" cy="%s" r="%s" %s/>' % (
                _cls(op), _fmt(op.cx), _fmt(op.cy), _fmt(op.r),
                _shape_style(op.fill, op.stroke, op.stroke_width)))
        elif isinstance(op, DrawWedge):
            out.append('<path%s d="%s" %s/>' % (
                _cls(op), wedge_path(op), _shape_style(op.fill, op.stroke, 1.0)))
        elif isinstance(op, DrawText):
            out.append('<text%s %s>%s</text>' % (
                _cls(op), _text_attrs(op), html.escape(op.text, quote=False)))
        elif isinstance(op, DrawImage):
            b64 = base64.b64encode(op.png_bytes).decode("ascii")
            out.append('<image%s x="%s" y="%s" width="%s" height="%s" '
                       'href="data:image/png;base64,%s"/>' % (
                           _cls(op), _fmt(op.x), _fmt(op.y), _fmt(op.width),
                           _fmt(op.height), b64))
        else:
            raise TypeError("unknown draw op %r" % (op,))
    out.append("</svg>")
    return "\n".join(out)
