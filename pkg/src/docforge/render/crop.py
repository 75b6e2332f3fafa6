"""Whitespace-trimmed text crop rendering.

Each crop is drawn on a clean background, trimmed to its ink box with at
most CROP_MARGIN pixels of non-ink on every side, and paired with a
sidecar that byte-for-byte equals the rendered (NFC) text.
"""

from __future__ import annotations

import unicodedata

from PIL import Image, ImageChops

from ..errors import RenderFailure
from ..fonts import TextMeasurer
from ..rng import SeededRng
from .plan import DrawText, Plan
from .raster import png_bytes, render_plan
from .style import PageStyle, RenderArtifact
from .svg import plan_to_svg

CROP_MARGIN = 2
CROP_SIZES = (14, 16, 18, 20, 24, 28, 32, 36, 40)

_CANVAS_PAD = 48


def _has_rtl(text: str) -> bool:
    return any(unicodedata.bidirectional(ch) in ("R", "AL") for ch in text)


def _ink_bbox(img: Image.Image, background: str):
    bg = Image.new("RGB", img.size, background)
    return ImageChops.difference(img.convert("RGB"), bg).getbbox()


def render_text_crop(text: str, style: PageStyle, rng: SeededRng,
                     measurer: TextMeasurer | None = None,
                     artifact_id: str = "crop") -> RenderArtifact:
    """Render one text snippet; returns PNG + matching SVG + sidecar.

    Font and size are sampled from the style's palette (only fonts covering
    the text are candidates); raises NoCoveringFont when none qualifies.
    """
    text = unicodedata.normalize("NFC", text)
    if not text.strip():
        raise ValueError("crop text must be non-empty")
    measurer = measurer or _shared_measurer()

    candidates = [f for f in style.fonts if f.covers(text)]
    if not candidates:
        from ..fonts import select_font
        select_font(text, list(style.fonts))  # raises NoCoveringFont with detail
    font = rng.choice(candidates)
    size = rng.choice(CROP_SIZES)
    direction = "rtl" if _has_rtl(text) else "ltr"

    width, height = measurer.measure(text, font, size)
    canvas_w = width + 2 * _CANVAS_PAD
    canvas_h = height + 2 * _CANVAS_PAD
    baseline = _CANVAS_PAD + height  # descender room stays inside the pad

    plan = Plan(width=canvas_w, height=canvas_h, background="#ffffff")
    plan.add(DrawText(x=_CANVAS_PAD if direction == "ltr" else canvas_w - _CANVAS_PAD,
                      y=baseline, text=text, font=font, size=float(size),
                      color=style.text_color,
                      anchor="start" if direction == "ltr" else "end",
                      direction=direction, cls="crop-text"))

    img = render_plan(plan, scale=1.0)
    box = _ink_bbox(img, "#ffffff")
    if box is None:
        raise RenderFailure("crop %r produced no ink" % text[:32])
    if box[0] <= 0 or box[1] <= 0 or box[2] >= img.width or box[3] >= img.height:
        raise RenderFailure("ink reached the canvas edge for %r" % text[:32])
    x1 = max(0, box[0] - CROP_MARGIN)
    y1 = max(0, box[1] - CROP_MARGIN)
    x2 = min(img.width, box[2] + CROP_MARGIN)
    y2 = min(img.height, box[3] + CROP_MARGIN)
    cropped = img.crop((x1, y1, x2, y2))

    # matching vector artifact: same plan shifted into the crop viewport
    crop_plan = Plan(width=x2 - x1, height=y2 - y1, background="#ffffff")
    op = plan.ops[0]
    crop_plan.add(DrawText(x=op.x - x1, y=op.y - y1, text=op.text, font=op.font,
                           size=op.size, color=op.color, anchor=op.anchor,
                           direction=op.direction, cls=op.cls))

    return RenderArtifact(
        artifact_id=artifact_id,
        ground_truth=text.encode("utf-8"),
        svg=plan_to_svg(crop_plan),
        png=png_bytes(cropped),
        meta={"font_family": font.family, "font_size": size, "direction": direction},
    ).stamp(rng)


_MEASURER: TextMeasurer | None = None


def _shared_measurer() -> TextMeasurer:
    global _MEASURER
    if _MEASURER is None:
        _MEASURER = TextMeasurer()
    return _MEASURER
