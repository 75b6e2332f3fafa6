from .crop import CROP_MARGIN, render_text_crop
from .page import render_page
from .plan import (DrawCircle, DrawImage, DrawLine, DrawPolygon, DrawRect,
                   DrawText, DrawWedge, Plan)
from .raster import has_shaping, plan_to_png, png_bytes, render_plan
from .style import (FONT_FAMILY_PALETTE, PLAIN_BACKGROUND, TEXT_COLOR_PALETTE,
                    PageStyle, RenderArtifact)
from .svg import plan_to_svg, wedge_path

__all__ = [
    "CROP_MARGIN", "DrawCircle", "DrawImage", "DrawLine", "DrawPolygon",
    "DrawRect", "DrawText", "DrawWedge", "FONT_FAMILY_PALETTE",
    "PLAIN_BACKGROUND", "PageStyle", "Plan", "RenderArtifact",
    "TEXT_COLOR_PALETTE", "has_shaping", "plan_to_png", "plan_to_svg",
    "png_bytes", "render_page", "render_plan", "render_text_crop", "wedge_path",
]
