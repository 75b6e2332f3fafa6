"""Font assets: glyph coverage, manifests, and text measurement.

Coverage is always extracted from the font file's character map, never
hand-entered, so select_font can guarantee every rendered codepoint has a
glyph. Measurement scales a cached reference-size extent linearly, which
keeps fitting monotone in size and fast.
"""

from __future__ import annotations

import glob
import json
import os
import unicodedata
from dataclasses import dataclass
from functools import lru_cache

from .errors import FontLoadError, NoCoveringFont

SCRIPT_CLASSES = ("arabic", "latin", "mono", "display")

_REFERENCE_SIZE = 128.0


@dataclass(frozen=True)
class FontAsset:
    family: str
    path: str
    script_class: str
    coverage: frozenset[int]

    @classmethod
    def from_file(cls, path: str, script_class: str = "latin",
                  family: str | None = None) -> "FontAsset":
        if script_class not in SCRIPT_CLASSES:
            raise FontLoadError("unknown script class %r" % script_class)
        try:
            from fontTools.ttLib import TTFont
            tt = TTFont(path, lazy=True)
            cmap = tt.getBestCmap()
            if family is None:
                name = tt["name"].getDebugName(1)
                family = name or os.path.splitext(os.path.basename(path))[0]
        except FileNotFoundError:
            raise FontLoadError("font file not found: %s" % path)
        except Exception as exc:
            raise FontLoadError("cannot read font %s: %s" % (path, exc)) from exc
        return cls(family=family, path=path, script_class=script_class,
                   coverage=frozenset(cmap.keys()))

    def covers(self, text: str) -> bool:
        return not self.uncovered(text)

    def uncovered(self, text: str) -> set[int]:
        """Codepoints of `text` with no glyph; control/format chars exempt."""
        missing = set()
        for ch in text:
            if ord(ch) in self.coverage:
                continue
            if unicodedata.category(ch) in ("Cf", "Cc"):
                continue
            missing.add(ord(ch))
        return missing


def select_font(text: str, chain: list[FontAsset]) -> FontAsset:
    """First font in the chain covering all non-control codepoints."""
    if not chain:
        raise ValueError("font chain must not be empty")
    best_missing: set[int] | None = None
    for font in chain:
        missing = font.uncovered(text)
        if not missing:
            return font
        if best_missing is None or len(missing) < len(best_missing):
            best_missing = missing
    raise NoCoveringFont(best_missing)


def load_font_manifest(path: str) -> list[FontAsset]:
    """Manifest JSON: [{"family": ..., "path": ..., "script_class": ...}].

    Relative font paths resolve against the manifest's directory. Coverage
    is extracted from each file at load time.
    """
    with open(path, encoding="utf-8") as fh:
        records = json.load(fh)
    if not isinstance(records, list) or not records:
        raise FontLoadError("font manifest must be a non-empty JSON array")
    base = os.path.dirname(os.path.abspath(path))
    assets = []
    for rec in records:
        font_path = rec["path"]
        if not os.path.isabs(font_path):
            font_path = os.path.join(base, font_path)
        assets.append(FontAsset.from_file(font_path,
                                          script_class=rec.get("script_class", "latin"),
                                          family=rec.get("family")))
    return assets


def write_font_manifest(assets: list[FontAsset], path: str):
    records = [{"family": a.family, "path": a.path, "script_class": a.script_class}
               for a in assets]
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(records, fh, ensure_ascii=False, indent=2)


def _candidate_font_files() -> list[str]:
    roots = ["/usr/share/fonts", "/usr/local/share/fonts",
             os.path.expanduser("~/.fonts")]
    try:
        import matplotlib
        roots.append(os.path.join(os.path.dirname(matplotlib.__file__),
                                  "mpl-data", "fonts", "ttf"))
    except ImportError:
        pass
    files: list[str] = []
    for root in roots:
        files.extend(glob.glob(os.path.join(root, "**", "*.ttf"), recursive=True))
        files.extend(glob.glob(os.path.join(root, "**", "*.otf"), recursive=True))
    return sorted(set(files))


@lru_cache(maxsize=1)
def default_font_assets() -> tuple[FontAsset, ...]:
    """Discover usable system fonts (regular faces only) and classify them.

    Fonts covering the Arabic block are classed "arabic"; monospaced
    families "mono"; the rest "latin".
    """
    assets = []
    for path in _candidate_font_files():
        base = os.path.basename(path).lower()
        if any(tag in base for tag in ("bold", "italic", "oblique", "display")):
            continue
        try:
            probe = FontAsset.from_file(path)
        except FontLoadError:
            continue
        arabic = all(cp in probe.coverage for cp in (0x0628, 0x064E, 0x0660))
        mono = "mono" in base
        script = "arabic" if arabic else ("mono" if mono else "latin")
        assets.append(FontAsset(family=probe.family, path=path,
                                script_class=script, coverage=probe.coverage))
    if not assets:
        raise FontLoadError("no usable fonts found on this system")
    return tuple(assets)


def arabic_capable(assets) -> list[FontAsset]:
    required = [0x0628, 0x064E, 0x0660]
    return [a for a in assets if all(cp in a.coverage for cp in required)]


class TextMeasurer:
    """Measures rendered text extents via Pillow font metrics.

    Extents are measured once per (font, text) at a reference size and
    scaled linearly, so measure() is exactly monotone in size.
    """

    def __init__(self):
        self._fonts: dict[str, object] = {}
        self._lines: dict[tuple[str, str], tuple[float, float]] = {}

    def _reference_font(self, font: FontAsset):
        cached = self._fonts.get(font.path)
        if cached is None:
            from PIL import ImageFont
            try:
                cached = ImageFont.truetype(font.path, _REFERENCE_SIZE)
            except OSError as exc:
                raise FontLoadError("cannot load %s: %s" % (font.path, exc)) from exc
            self._fonts[font.path] = cached
        return cached

    def _reference_extent(self, text: str, font: FontAsset) -> tuple[float, float]:
        key = (font.path, text)
        cached = self._lines.get(key)
        if cached is None:
            ref = self._reference_font(font)
            width = ref.getlength(text)
            ascent, descent = ref.getmetrics()
            bbox = ref.getbbox(text)
            ink_h = (bbox[3] - bbox[1]) if bbox else 0
            cached = (float(width), float(max(ascent + descent, ink_h)))
            self._lines[key] = cached
        return cached

    def measure(self, text: str, font: FontAsset, size: float) -> tuple[float, float]:
        w, h = self._reference_extent(text, font)
        scale = size / _REFERENCE_SIZE
        return w * scale, h * scale

    def average_advance(self, font: FontAsset, size: float = 1.0) -> float:
        """Mean advance width of a representative sample, per point of size."""
        sample = "ابتجدهوزحطيككلمنسعفصقرشتثخذضظغ0123456789abcdefghij"
        usable = "".join(ch for ch in sample if ord(ch) in font.coverage)
        if not usable:
            usable = "0123456789"
        w, _ = self.measure(usable, font, size)
        return w / len(usable)
