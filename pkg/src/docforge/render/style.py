"""Page styling palettes and the artifact container.

The text palette holds nine colors and the family registry fifteen names;
samplers draw from whatever subset the active font manifest actually
provides, so corpora stay renderable on any machine.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .. import GENERATOR_VERSION
from ..fonts import FontAsset
from ..rng import SeededRng

# Nine text colors: black plus common document ink tones.
TEXT_COLOR_PALETTE = (
    "#000000",  # black
    "#1f1f1f",  # near-black
    "#14213d",  # navy
    "#5c0a0a",  # dark red
    "#0b3d0b",  # dark green
    "#3d2b1f",  # dark brown
    "#1a3a6b",  # ink blue
    "#2f4f4f",  # slate
    "#4a235a",  # plum
)

# Fifteen-family registry for page rendering: calligraphic, sans,
# monospaced, display, and system default names.
FONT_FAMILY_PALETTE = (
    "ArefRuqaa",
    "ReemKufi",
    "Saudi",
    "Cairo",
    "Fund",
    "AzarMehrMonospacedSans",
    "AzarMehrMonospacedSerif",
    "KawkabMono",
    "DejaVuSansMono",
    "TheYearoftheCamel",
    "MusmekSaudi",
    "NaseebSaudi",
    "WatadSaudi",
    "Courier",
    "SimSunExtB",
)

BACKGROUND_MODES = ("original_scan", "plain")

PLAIN_BACKGROUND = "#fbfaf6"


@dataclass(frozen=True)
class PageStyle:
    fonts: tuple[FontAsset, ...]
    text_color: str
    background_mode: str = "plain"

    def __post_init__(self):
        if not self.fonts:
            raise ValueError("style needs at least one font")
        if self.text_color not in TEXT_COLOR_PALETTE:
            raise ValueError("text color %r not in the configured palette" % self.text_color)
        if self.background_mode not in BACKGROUND_MODES:
            raise ValueError("unknown background mode %r" % self.background_mode)

    @classmethod
    def sample(cls, rng: SeededRng, assets, background_mode: str = "plain") -> "PageStyle":
        """Random per-page appearance: font subset and ink color."""
        assets = list(assets)
        k = min(len(assets), rng.randint(1, 3))
        fonts = tuple(rng.sample(assets, k))
        color = rng.choice(TEXT_COLOR_PALETTE)
        return cls(fonts=fonts, text_color=color, background_mode=background_mode)


@dataclass
class RenderArtifact:
    """One generated output: canonical SVG, optional raster, ground truth."""

    artifact_id: str
    ground_truth: bytes
    svg: str | None = None
    png: bytes | None = None
    seed: int | None = None
    stream_id: int | None = None
    generator_version: str = GENERATOR_VERSION
    meta: dict = field(default_factory=dict)

    def stamp(self, rng: SeededRng) -> "RenderArtifact":
        self.seed = rng.seed_value
        self.stream_id = rng.stream_id
        return self
