"""Backend-neutral draw plan.

Renderers build a plan once; the SVG writer serializes it as the canonical
vector artifact and the raster backend executes the same ops with Pillow.
Angles are degrees measured clockwise from +x in screen coordinates
(y grows downward), matching Pillow's arc convention.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..fonts import FontAsset


@dataclass(frozen=True)
class DrawRect:
    x: float
    y: float
    width: float
    height: float
    fill: str | None = None
    stroke: str | None = None
    stroke_width: float = 1.0
    cls: str | None = None


@dataclass(frozen=True)
class DrawLine:
    x1: float
    y1: float
    x2: float
    y2: float
    color: str = "#000000"
    width: float = 1.0
    cls: str | None = None


@dataclass(frozen=True)
class DrawPolygon:
    points: tuple[tuple[float, float], ...]
    fill: str | None = None
    stroke: str | None = None
    stroke_width: float = 1.0
    cls: str | None = None


@dataclass(frozen=True)
class DrawCircle:
    cx: float
    cy: float
    r: float
    fill: str | None = None
    stroke: str | None = None
    stroke_width: float = 1.0
    cls: str | None = None


@dataclass(frozen=True)
class DrawWedge:
    """Pie sector (inner_r = 0) or annulus sector (doughnut)."""

    cx: float
    cy: float
    r: float
    start_deg: float
    end_deg: float
    fill: str
    inner_r: float = 0.0
    stroke: str | None = None
    cls: str | None = None


@dataclass(frozen=True)
class DrawText:
    """Text anchored at (x, y): y is the baseline; anchor is start,
    middle, or end along the inline axis."""

    x: float
    y: float
    text: str
    font: FontAsset
    size: float
    color: str = "#000000"
    anchor: str = "start"
    direction: str | None = None
    rotation: float = 0.0  # degrees, clockwise about the anchor point
    cls: str | None = None


@dataclass(frozen=True)
class DrawImage:
    """Embedded raster (PNG bytes), e.g. a scanned page background."""

    x: float
    y: float
    width: float
    height: float
    png_bytes: bytes
    cls: str | None = None


DrawOp = object  # any of the dataclasses above


@dataclass
class Plan:
    width: float
    height: float
    background: str | None = "#ffffff"
    ops: list = field(default_factory=list)

    def add(self, op) -> None:
        self.ops.append(op)
