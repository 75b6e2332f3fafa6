"""Full-page rendering: translated text composited over the original scan.

Replaced line regions are first whited out with the local background
estimate (median color of the box's 2px border ring), then redrawn. The
sidecar lists (line_id, bbox, text) for every drawn line, where text is
the segment before bidi controls were added.
"""

from __future__ import annotations

import io
import json
import logging
import os
import statistics

from PIL import Image

from ..errors import MissingBackground, RenderFailure
from ..ingest import PageAnnotation
from ..reflow import LineAssignment, apply_bidi_controls
from ..rng import SeededRng
from .plan import DrawImage, DrawRect, DrawText, Plan
from .raster import plan_to_png
from .style import PLAIN_BACKGROUND, PageStyle, RenderArtifact
from .svg import plan_to_svg

logger = logging.getLogger(__name__)

_RING = 2


def _load_background(page: PageAnnotation, background_root: str | None) -> Image.Image:
    path = page.background_ref
    if background_root and path and not os.path.isabs(path):
        path = os.path.join(background_root, path)
    try:
        img = Image.open(path).convert("RGB")
    except Exception as exc:
        raise MissingBackground("cannot load background %r: %s" % (path, exc)) from exc
    if img.size != (int(page.width), int(page.height)):
        img = img.resize((int(page.width), int(page.height)), Image.BILINEAR)
    return img


def _median_ring_color(img: Image.Image, box) -> str:
    """Median RGB of the pixels ringing the box; the erase color."""
    x1 = max(0, int(box.x) - _RING)
    y1 = max(0, int(box.y) - _RING)
    x2 = min(img.width, int(box.x2) + _RING)
    y2 = min(img.height, int(box.y2) + _RING)
    if x2 <= x1 or y2 <= y1:
        return "#ffffff"
    region = img.crop((x1, y1, x2, y2))
    w, h = region.size
    inner = (int(box.x) - x1, int(box.y) - y1,
             int(box.x2) - x1, int(box.y2) - y1)
    pixels = region.load()
    ring = [pixels[px, py] for py in range(h) for px in range(w)
            if not (inner[0] <= px < inner[2] and inner[1] <= py < inner[3])]
    if not ring:
        ring = [pixels[px, py] for py in range(h) for px in range(w)]
    channels = list(zip(*ring))
    rgb = tuple(int(statistics.median(c)) for c in channels)
    return "#%02x%02x%02x" % rgb


def render_page(page: PageAnnotation, assignments: list[LineAssignment],
                style: PageStyle, rng: SeededRng,
                background_root: str | None = None,
                raster: bool = True, raster_scale: float = 1.0,
                artifact_id: str = "page") -> RenderArtifact:
    """Composite fitted line assignments onto the page background.

    Pages in original_scan mode without a background reference fall back to
    a plain background with a warning; an unreadable reference raises
    MissingBackground.
    """
    by_id = {ln.line_id: ln for ln in page.lines}
    background_img = None
    if style.background_mode == "original_scan":
        if page.background_ref:
            background_img = _load_background(page, background_root)
        else:
            logger.warning("page %d: no background scan, using plain background",
                           page.page_index)

    plan = Plan(width=page.width, height=page.height,
                background=None if background_img else PLAIN_BACKGROUND)
    if background_img is not None:
        buf = io.BytesIO()
        background_img.save(buf, format="PNG", optimize=False, compress_level=6)
        plan.add(DrawImage(x=0, y=0, width=page.width, height=page.height,
                           png_bytes=buf.getvalue(), cls="background"))

    records = []
    for asg in assignments:
        if not asg.segment:
            continue
        if asg.font is None or asg.font_size is None:
            raise RenderFailure("assignment %r not fitted" % asg.line_id)
        line = by_id.get(asg.line_id)
        if line is None:
            raise RenderFailure("assignment names unknown line %r" % asg.line_id)
        box = line.bbox
        erase = (_median_ring_color(background_img, box)
                 if background_img is not None else PLAIN_BACKGROUND)
        plan.add(DrawRect(x=box.x, y=box.y, width=box.width, height=box.height,
                          fill=erase, cls="erase"))
        if asg.alignment == "left":
            x, anchor = box.x, "start"
        elif asg.alignment == "center":
            x, anchor = box.x + box.width / 2.0, "middle"
        else:
            x, anchor = box.x2, "end"
        drawn = apply_bidi_controls(asg.segment, asg.direction)
        plan.add(DrawText(x=x, y=box.y2, text=drawn, font=asg.font,
                          size=asg.font_size, color=style.text_color,
                          anchor=anchor, direction=asg.direction, cls="line-text"))
        records.append({"line_id": asg.line_id,
                        "bbox": [box.x, box.y, box.width, box.height],
                        "text": asg.segment})

    sidecar = "".join(json.dumps(rec, ensure_ascii=False, sort_keys=True) + "\n"
                      for rec in records)
    return RenderArtifact(
        artifact_id=artifact_id,
        ground_truth=sidecar.encode("utf-8"),
        svg=plan_to_svg(plan),
        png=plan_to_png(plan, scale=raster_scale) if raster else None,
        meta={"lines_drawn": len(records), "page_index": page.page_index},
    ).stamp(rng)
