"""Controlled diacritization and numeral substitution for Arabic text.

These are visual-variability transforms, not linguistic diacritization:
marks are removed or inserted at configured probabilities so rendered
samples span the range from bare to fully vocalized text.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass

from .rng import SeededRng

# Tashkeel marks: fathatan..sukun (U+064B-U+0652) plus superscript alef.
DIACRITICS = frozenset(chr(cp) for cp in range(0x064B, 0x0653)) | {"ٰ"}

# Insertion draws uniformly from the short-vowel set.
SHORT_VOWELS = (
    "َ",  # fatha
    "ُ",  # damma
    "ِ",  # kasra
    "ْ",  # sukun
    "ّ",  # shadda
    "ً",  # fathatan
    "ٌ",  # dammatan
    "ٍ",  # kasratan
)

REMOVAL_LEVELS = ("none", "light", "medium", "heavy")

# Calibrated removal probabilities per level.
_REMOVAL_PROB = {"none": 0.0, "light": 0.25, "medium": 0.50, "heavy": 1.00}

_WESTERN_TO_EASTERN = str.maketrans("0123456789", "٠١٢٣٤٥٦٧٨٩")
_EASTERN_TO_WESTERN = str.maketrans("٠١٢٣٤٥٦٧٨٩", "0123456789")

_DIGIT_RUN = re.compile("[0-9]+|[٠-٩]+")


@dataclass(frozen=True)
class DiacritizationSpec:
    """Per-artifact text transform knobs; all probabilities in [0, 1]."""

    removal_level: str = "none"
    insertion_rate: float = 0.0
    eastern_numeral_fraction: float = 0.0

    def __post_init__(self):
        if self.removal_level not in REMOVAL_LEVELS:
            raise ValueError("removal_level must be one of %s" % (REMOVAL_LEVELS,))
        for name in ("insertion_rate", "eastern_numeral_fraction"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ValueError("%s must be in [0, 1]" % name)


def _is_arabic_letter(ch: str) -> bool:
    cp = ord(ch)
    if not (0x0600 <= cp <= 0x06FF or 0x0750 <= cp <= 0x077F or 0x08A0 <= cp <= 0x08FF):
        return False
    return unicodedata.category(ch).startswith("L")


def strip_diacritics(text: str, level: str, rng: SeededRng) -> str:
    """Remove each diacritic mark independently with the level's probability.

    Base letters never change; light=0.25, medium=0.50, heavy=1.00, none=0.
    """
    p = _REMOVAL_PROB[level]
    if p == 0.0:
        return text
    out = []
    for ch in text:
        if ch in DIACRITICS and rng.random() < p:
            continue
        out.append(ch)
    return unicodedata.normalize("NFC", "".join(out))


def insert_diacritics(text: str, rate: float, rng: SeededRng) -> str:
    """After each bare Arabic base letter, insert one random short vowel
    with probability `rate`. Letters already carrying a mark are skipped."""
    if rate <= 0.0:
        return text
    out = []
    n = len(text)
    for i, ch in enumerate(text):
        out.append(ch)
        if not _is_arabic_letter(ch):
            continue
        if i + 1 < n and text[i + 1] in DIACRITICS:
            continue
        if rng.random() < rate:
            out.append(rng.choice(SHORT_VOWELS))
    return unicodedata.normalize("NFC", "".join(out))


def substitute_numerals(text: str, eastern_fraction: float, rng: SeededRng) -> str:
    """Flip whole digit runs between Western and Eastern Arabic numerals.

    Each maximal run gets one draw: Western runs become Eastern with
    probability `eastern_fraction`; Eastern runs become Western with the
    complementary probability. Runs are never mixed internally.
    """
    def flip(match: re.Match) -> str:
        run = match.group(0)
        if run[0].isascii():
            if rng.random() < eastern_fraction:
                return run.translate(_WESTERN_TO_EASTERN)
            return run
        if rng.random() < (1.0 - eastern_fraction):
            return run.translate(_EASTERN_TO_WESTERN)
        return run

    return _DIGIT_RUN.sub(flip, text)


def apply_spec(text: str, spec: DiacritizationSpec, rng: SeededRng) -> str:
    """Strip, then insert, then substitute numerals, under one spec."""
    text = strip_diacritics(text, spec.removal_level, rng)
    text = insert_diacritics(text, spec.insertion_rate, rng)
    return substitute_numerals(text, spec.eastern_numeral_fraction, rng)
