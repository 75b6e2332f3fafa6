"""Table spec generation: dimensions, merges, styles, and cell content.

Two generation modes mirror the corpus design: consistent tables keep one
font/size/color with shaded header and footer bands and RTL direction;
random tables vary fonts, sizes, colors, backgrounds and alignment per
cell and may mix languages or leave cells empty.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..arabic import DiacritizationSpec, apply_spec
from ..data import ARABIC_HEADER_WORDS, ARABIC_WORDS, LATIN_WORDS
from ..errors import SpecViolation
from ..render.style import FONT_FAMILY_PALETTE, TEXT_COLOR_PALETTE
from ..rng import SeededRng

STYLE_MODES = ("consistent", "random")

# Dimension ranges per mode: (rows_lo, rows_hi, cols_lo, cols_hi, max_merges)
CONSISTENT_DIMS = (3, 12, 2, 8, 3)
RANDOM_DIMS = (2, 15, 2, 10, 6)

CELL_BACKGROUNDS = ("#ffffff", "#f6f3ec", "#eef3f8", "#f8eeee", "#eef8ef",
                    "#f4f4f4", "#fdf6e3")
HEADER_SHADES = ("#dcd6c5", "#ccd9e8", "#d8e4d8", "#e3d5d5", "#d9d9d9")
H_ALIGNS = ("left", "center", "right")
V_ALIGNS = ("top", "middle", "bottom")

_MAX_SPAN = 3
_MERGE_ATTEMPTS = 40


@dataclass(frozen=True)
class MergeSpan:
    """Rectangular merged region anchored at (r0, c0)."""

    r0: int
    c0: int
    row_span: int
    col_span: int

    def cells(self):
        for r in range(self.r0, self.r0 + self.row_span):
            for c in range(self.c0, self.c0 + self.col_span):
                yield (r, c)


@dataclass(frozen=True)
class TableStyle:
    """Uniform appearance for consistent-mode tables."""

    font_family: str
    font_size: int
    text_color: str
    header_background: str
    border_color: str = "#555555"
    v_align: str = "middle"  # varies table to table, uniform within one


@dataclass(frozen=True)
class CellStyle:
    font_family: str
    font_size: int
    text_color: str
    background: str
    h_align: str
    v_align: str


@dataclass(frozen=True)
class ContentPolicy:
    """What goes inside cells: language mix and text transforms."""

    diacritization: DiacritizationSpec = field(default_factory=DiacritizationSpec)
    latin_fraction: float = 0.0   # probability a text cell uses Latin words
    numeric_fraction: float = 0.4  # probability a body cell is numeric
    empty_cell_rate: float = 0.0  # random mode: probability a body cell is empty
    filler_rate: float = 0.0      # random mode: probability of a noise token


@dataclass(frozen=True)
class TableSpec:
    rows: int
    cols: int
    merges: tuple[MergeSpan, ...] = ()
    header_rows: int = 0
    footer_rows: int = 0
    caption: str | None = None
    caption_position: str = "top"
    style_mode: str = "consistent"
    direction: str = "rtl"
    table_style: TableStyle | None = None
    cell_styles: dict | None = None  # (r, c) -> CellStyle, random mode
    content_policy: ContentPolicy = field(default_factory=ContentPolicy)


def _section_bounds(spec: TableSpec, row: int) -> tuple[int, int]:
    """[start, end) of the section (header/body/footer) containing `row`."""
    body_start = spec.header_rows
    body_end = spec.rows - spec.footer_rows
    if row < body_start:
        return 0, body_start
    if row >= body_end:
        return body_end, spec.rows
    return body_start, body_end


def validate_table_spec(spec: TableSpec) -> None:
    if spec.rows < 1 or spec.cols < 1:
        raise SpecViolation("table must have positive dimensions")
    if spec.header_rows < 0 or spec.footer_rows < 0:
        raise SpecViolation("section row counts must be non-negative")
    if spec.header_rows + spec.footer_rows >= spec.rows:
        raise SpecViolation("header+footer rows must leave at least one body row")
    if spec.style_mode not in STYLE_MODES:
        raise SpecViolation("unknown style mode %r" % spec.style_mode)
    if spec.caption_position not in ("top", "bottom"):
        raise SpecViolation("caption position must be top or bottom")
    occupied: set[tuple[int, int]] = set()
    for m in spec.merges:
        if m.row_span < 1 or m.col_span < 1:
            raise SpecViolation("merge spans must be positive")
        if m.r0 < 0 or m.c0 < 0 or m.r0 + m.row_span > spec.rows or m.c0 + m.col_span > spec.cols:
            raise SpecViolation("merge %r exceeds the %dx%d grid" % (m, spec.rows, spec.cols))
        lo, hi = _section_bounds(spec, m.r0)
        if m.r0 + m.row_span > hi:
            raise SpecViolation("merge %r crosses a section boundary" % (m,))
        cells = set(m.cells())
        if cells & occupied:
            raise SpecViolation("merge %r overlaps another merge" % (m,))
        occupied |= cells


def logical_grid(spec: TableSpec) -> tuple[tuple[tuple[int, int], ...], ...]:
    """rows x cols matrix; each position names its owning cell's anchor."""
    owner: dict[tuple[int, int], tuple[int, int]] = {}
    for m in spec.merges:
        for cell in m.cells():
            owner[cell] = (m.r0, m.c0)
    return tuple(
        tuple(owner.get((r, c), (r, c)) for c in range(spec.cols))
        for r in range(spec.rows)
    )


def anchors(spec: TableSpec) -> list[tuple[int, int, int, int]]:
    """Emitted cells as (r, c, row_span, col_span), row-major."""
    merge_at = {(m.r0, m.c0): m for m in spec.merges}
    covered = {cell for m in spec.merges for cell in m.cells()} - set(merge_at)
    out = []
    for r in range(spec.rows):
        for c in range(spec.cols):
            if (r, c) in covered:
                continue
            m = merge_at.get((r, c))
            if m:
                out.append((r, c, m.row_span, m.col_span))
            else:
                out.append((r, c, 1, 1))
    return out


def _sample_merges(rng: SeededRng, spec_rows: int, spec_cols: int,
                   header_rows: int, footer_rows: int, max_merges: int) -> tuple[MergeSpan, ...]:
    count = rng.randint(0, max_merges)
    merges: list[MergeSpan] = []
    occupied: set[tuple[int, int]] = set()
    body_start, body_end = header_rows, spec_rows - footer_rows
    for _ in range(_MERGE_ATTEMPTS):
        if len(merges) >= count:
            break
        r0 = rng.randrange(spec_rows)
        c0 = rng.randrange(spec_cols)
        if r0 < body_start:
            sect_hi = body_start
        elif r0 >= body_end:
            sect_hi = spec_rows
        else:
            sect_hi = body_end
        max_rs = min(_MAX_SPAN, sect_hi - r0)
        max_cs = min(_MAX_SPAN, spec_cols - c0)
        row_span = rng.randint(1, max_rs)
        col_span = rng.randint(1, max_cs)
        if row_span == 1 and col_span == 1:
            continue
        m = MergeSpan(r0, c0, row_span, col_span)
        cells = set(m.cells())
        if cells & occupied:
            continue
        occupied |= cells
        merges.append(m)
    return tuple(merges)


def generate_table_spec(mode: str, rng: SeededRng) -> TableSpec:
    """Sample a valid spec for the given style mode."""
    if mode not in STYLE_MODES:
        raise SpecViolation("unknown style mode %r" % mode)
    rows_lo, rows_hi, cols_lo, cols_hi, max_merges = (
        CONSISTENT_DIMS if mode == "consistent" else RANDOM_DIMS)
    rows = rng.randint(rows_lo, rows_hi)
    cols = rng.randint(cols_lo, cols_hi)
    header_rows = rng.choice([0, 1, 1, 2]) if rows >= 4 else rng.choice([0, 1])
    footer_rows = rng.choice([0, 0, 0, 1])
    while header_rows + footer_rows >= rows:
        footer_rows = 0
        if header_rows >= rows:
            header_rows = rows - 1
    merges = _sample_merges(rng, rows, cols, header_rows, footer_rows, max_merges)
    caption = None
    if rng.random() < 0.5:
        caption = "جدول %d: %s" % (rng.randint(1, 99), rng.choice(ARABIC_WORDS))
    caption_position = rng.choice(["top", "bottom"])

    if mode == "consistent":
        style = TableStyle(
            font_family=rng.choice(FONT_FAMILY_PALETTE),
            font_size=rng.choice([10, 11, 12, 14, 16]),
            text_color=rng.choice(TEXT_COLOR_PALETTE),
            header_background=rng.choice(HEADER_SHADES),
            v_align=rng.choice(V_ALIGNS),
        )
        policy = ContentPolicy(
            diacritization=DiacritizationSpec(
                removal_level=rng.choice(["none", "light", "medium", "heavy"]),
                insertion_rate=0.0,
                # whole-table numeral system: Eastern or Western
                eastern_numeral_fraction=rng.choice([0.0, 1.0])),
        )
        spec = TableSpec(rows=rows, cols=cols, merges=merges,
                         header_rows=header_rows, footer_rows=footer_rows,
                         caption=caption, caption_position=caption_position,
                         style_mode=mode, direction="rtl",
                         table_style=style, content_policy=policy)
    else:
        cell_styles = {}
        for r in range(rows):
            for c in range(cols):
                cell_styles[(r, c)] = CellStyle(
                    font_family=rng.choice(FONT_FAMILY_PALETTE),
                    font_size=rng.choice([8, 9, 10, 11, 12, 14, 16, 18]),
                    text_color=rng.choice(TEXT_COLOR_PALETTE),
                    background=rng.choice(CELL_BACKGROUNDS),
                    h_align=rng.choice(H_ALIGNS),
                    v_align=rng.choice(V_ALIGNS),
                )
        policy = ContentPolicy(
            diacritization=DiacritizationSpec(
                removal_level=rng.choice(["none", "light", "medium", "heavy"]),
                insertion_rate=rng.choice([0.0, 0.15]),
                eastern_numeral_fraction=rng.uniform(0.0, 1.0)),
            latin_fraction=rng.choice([0.0, 0.15, 0.3]),
            empty_cell_rate=rng.choice([0.0, 0.08, 0.15]),
            filler_rate=rng.choice([0.0, 0.05, 0.1]),
        )
        spec = TableSpec(rows=rows, cols=cols, merges=merges,
                         header_rows=header_rows, footer_rows=footer_rows,
                         caption=caption, caption_position=caption_position,
                         style_mode=mode, direction="rtl",
                         table_style=None, cell_styles=cell_styles,
                         content_policy=policy)
    validate_table_spec(spec)
    return spec


def _number_token(rng: SeededRng) -> str:
    if rng.random() < 0.6:
        return str(rng.randint(0, 9999))
    return "%.2f" % rng.uniform(0, 1000)


def _filler_token(rng: SeededRng) -> str:
    pool = "ابجدهوزحطيكلمنسعفصقرشت"
    return "".join(rng.choice(pool) for _ in range(rng.randint(2, 6)))


def generate_table_content(spec: TableSpec, rng: SeededRng) -> list[list[str]]:
    """rows x cols grid of cell text; only anchor positions are rendered."""
    policy = spec.content_policy
    grid = [["" for _ in range(spec.cols)] for _ in range(spec.rows)]
    body_start, body_end = spec.header_rows, spec.rows - spec.footer_rows
    for r, c, _, _ in anchors(spec):
        in_header = r < body_start
        in_footer = r >= body_end
        if in_header:
            text = rng.choice(ARABIC_HEADER_WORDS)
        elif in_footer:
            text = "%s %s" % (rng.choice(("المجموع", "الإجمالي")), _number_token(rng))
        elif spec.style_mode == "random" and rng.random() < policy.empty_cell_rate:
            text = ""
        elif rng.random() < policy.numeric_fraction:
            text = _number_token(rng)
        elif spec.style_mode == "random" and rng.random() < policy.filler_rate:
            text = _filler_token(rng)
        elif rng.random() < policy.latin_fraction:
            text = " ".join(rng.choice(LATIN_WORDS)
                            for _ in range(rng.randint(1, 2)))
        else:
            text = " ".join(rng.choice(ARABIC_WORDS)
                            for _ in range(rng.randint(1, 3)))
        grid[r][c] = apply_spec(text, policy.diacritization, rng) if text else ""
    return grid
