"""Execute a draw plan with Pillow.

Same geometry as the SVG writer; text shaping (Arabic joining, RTL order)
is delegated to Pillow's raqm layout engine when available.
"""

from __future__ import annotations

import io

from PIL import Image, ImageDraw, ImageFont, features

from ..errors import RenderFailure
from .plan import (DrawCircle, DrawImage, DrawLine, DrawPolygon, DrawRect,
                   DrawText, DrawWedge, Plan)

_HAS_RAQM = features.check("raqm")

_ANCHOR = {"start": "ls", "middle": "ms", "end": "rs"}

_font_cache: dict[tuple[str, float], ImageFont.FreeTypeFont] = {}


def _load_font(path: str, size: float) -> ImageFont.FreeTypeFont:
    key = (path, round(size * 4) / 4.0)
    font = _font_cache.get(key)
    if font is None:
        font = ImageFont.truetype(path, key[1])
        _font_cache[key] = font
    return font


def _draw_text(img: Image.Image, draw: ImageDraw.ImageDraw, op: DrawText, scale: float):
    font = _load_font(op.font.path, op.size * scale)
    direction = op.direction if _HAS_RAQM else None
    kwargs = {"font": font, "fill": op.color, "anchor": _ANCHOR[op.anchor]}
    if direction:
        kwargs["direction"] = direction
    x, y = op.x * scale, op.y * scale
    if not op.rotation:
        draw.text((x, y), op.text, **kwargs)
        return
    # rotated text: render on a transparent tile, rotate, paste at anchor
    pad = int(op.size * scale * 2)
    w = int(draw.textlength(op.text, font=font)) + 2 * pad
    h = int(op.size * scale * 2) + 2 * pad
    tile = Image.new("RGBA", (max(w, 1), max(h, 1)), (0, 0, 0, 0))
    tdraw = ImageDraw.Draw(tile)
    kwargs["anchor"] = _ANCHOR[op.anchor]
    tdraw.text((w / 2, h / 2), op.text, **{**kwargs, "anchor": "mm"})
    rotated = tile.rotate(-op.rotation, expand=True, resample=Image.BICUBIC)
    px = int(x - rotated.width / 2)
    py = int(y - rotated.height / 2)
    img.paste(rotated, (px, py), rotated)


def render_plan(plan: Plan, scale: float = 1.0) -> Image.Image:
    """Rasterize a plan; `scale` multiplies all coordinates (DPI control)."""
    w = max(1, int(round(plan.width * scale)))
    h = max(1, int(round(plan.height * scale)))
    img = Image.new("RGB", (w, h), plan.background or "#ffffff")
    draw = ImageDraw.Draw(img)
    s = scale
    try:
        for op in plan.ops:
            if isinstance(op, DrawRect):
                xy = [op.x * s, op.y * s, (op.x + op.width) * s, (op.y + op.height) * s]
                draw.rectangle(xy, fill=op.fill, outline=op.stroke,
                               width=max(1, int(round(op.stroke_width * s))) if op.stroke else 1)
            elif isinstance(op, DrawLine):
                draw.line([op.x1 * s, op.y1 * s, op.x2 * s, op.y2 * s],
                          fill=op.color, width=max(1, int(round(op.width * s))))
            elif isinstance(op, DrawPolygon):
                draw.polygon([(x * s, y * s) for x, y in op.points],
                             fill=op.fill, outline=op.stroke)
            elif isinstance(op, DrawCircle):
                xy = [(op.cx - op.r) * s, (op.cy - op.r) * s,
                      (op.cx + op.r) * s, (op.cy + op.r) * s]
                draw.ellipse(xy, fill=op.fill, outline=op.stroke,
                             width=max(1, int(round(op.stroke_width * s))) if op.stroke else 1)
            elif isinstance(op, DrawWedge):
                box = [(op.cx - op.r) * s, (op.cy - op.r) * s,
                       (op.cx + op.r) * s, (op.cy + op.r) * s]
                if op.inner_r <= 0:
                    draw.pieslice(box, op.start_deg, op.end_deg, fill=op.fill,
                                  outline=op.stroke)
                else:
                    ring = max(1, int(round((op.r - op.inner_r) * s)))
                    mid = (op.r + op.inner_r) / 2.0
                    arc_box = [(op.cx - mid) * s, (op.cy - mid) * s,
                               (op.cx + mid) * s, (op.cy + mid) * s]
                    draw.arc(arc_box, op.start_deg, op.end_deg, fill=op.fill, width=ring)
            elif isinstance(op, DrawText):
                _draw_text(img, draw, op, s)
            elif isinstance(op, DrawImage):
                tile = Image.open(io.BytesIO(op.png_bytes)).convert("RGB")
                target = (max(1, int(round(op.width * s))), max(1, int(round(op.height * s))))
                if tile.size != target:
                    tile = tile.resize(target, Image.BILINEAR)
                img.paste(tile, (int(round(op.x * s)), int(round(op.y * s))))
            else:
                raise TypeError("unknown draw op %r" % (op,))
    except TypeError:
        raise
    except Exception as exc:
        raise RenderFailure("raster backend failed: %s" % exc) from exc
    return img


def png_bytes(img: Image.Image) -> bytes:
    buf = io.BytesIO()
    img.save(buf, format="PNG", optimize=False, compress_level=6)
    return buf.getvalue()


def plan_to_png(plan: Plan, scale: float = 1.0) -> bytes:
    return png_bytes(render_plan(plan, scale))


def has_shaping() -> bool:
    return _HAS_RAQM
