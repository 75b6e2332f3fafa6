"""Paragraph-block translation through pluggable providers.

Two hard constraints are enforced on every provider response: line
cardinality is preserved (one translated line per source line, never a
merged paragraph), and protected tokens (abbreviations like "U.S." or
"Inc.", symbol-number tokens like "$3" or "5%") survive unchanged.
Protected tokens are masked with sentinels before the provider sees the
text and restored afterwards, so even a real MT model cannot touch them.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass

from .errors import CardinalityViolation, PreservationViolation, ProviderUnavailable

# Masking sentinels use mathematical white brackets; those two codepoints
# are reserved and must not occur in source text.
SENTINEL_OPEN = "⟦"
SENTINEL_CLOSE = "⟧"

_RTL_LANGS = {"ar", "he", "fa", "ur"}

# Protection grammar: currency-prefixed numbers, unit-suffixed numbers,
# dotted uppercase abbreviations (U.S., U.S.A.), short capitalized
# abbreviations (Inc., Ltd., Mr.), and standalone symbol tokens.
_PROTECT_RE = re.compile(
    r"(?P<currency>[$€£¥][0-9][0-9,.]*)"
    r"|(?P<unit>[0-9][0-9,.]*[%°])"
    r"|(?P<dotted>(?:[A-Z]\.){2,})"
    r"|(?P<abbrev>\b[A-Z][a-z]{1,3}\.)"
    r"|(?P<symbol>[$%№])"
)

_KIND_BY_GROUP = {
    "currency": "symbol",
    "unit": "symbol",
    "dotted": "abbreviation",
    "abbrev": "abbreviation",
    "symbol": "symbol",
}


@dataclass(frozen=True)
class ProtectedToken:
    surface: str
    kind: str
    position: int


@dataclass(frozen=True)
class Violation:
    surface: str
    message: str


@dataclass(frozen=True)
class TranslationRequest:
    """Lines of one paragraph plus per-boundary contiguity flags.

    contiguous[i] is True when lines[i] and lines[i+1] flow together;
    discontiguous boundaries (list items, headings) must come back as
    separate lines.
    """

    lines: tuple[str, ...]
    contiguous: tuple[bool, ...]
    source_lang: str
    target_lang: str

    def __post_init__(self):
        if not self.lines:
            raise ValueError("request must contain at least one line")
        if len(self.contiguous) != max(0, len(self.lines) - 1):
            raise ValueError("need one contiguity flag per line boundary")


@dataclass(frozen=True)
class TranslationResponse:
    lines: tuple[str, ...]
    direction: str  # 'rtl' when the target language is written right-to-left


def find_protected_tokens(text: str) -> list[ProtectedToken]:
    return [
        ProtectedToken(surface=m.group(0), kind=_KIND_BY_GROUP[m.lastgroup], position=m.start())
        for m in _PROTECT_RE.finditer(text)
    ]


def protect_tokens(text: str) -> tuple[str, list[ProtectedToken]]:
    """Mask every protected token with a unique sentinel ⟦Tn⟧.

    Sentinel numbering is positionally increasing from 0. The bracket
    codepoints U+27E6/U+27E7 are reserved for masking.
    """
    tokens = find_protected_tokens(text)
    parts = []
    cursor = 0
    for n, tok in enumerate(tokens):
        parts.append(text[cursor:tok.position])
        parts.append("%sT%d%s" % (SENTINEL_OPEN, n, SENTINEL_CLOSE))
        cursor = tok.position + len(tok.surface)
    parts.append(text[cursor:])
    return "".join(parts), tokens


def unprotect_tokens(masked: str, tokens: list[ProtectedToken]) -> str:
    """Restore sentinels to their original surfaces.

    Raises PreservationViolation when a sentinel was lost by the provider.
    """
    out = masked
    for n, tok in enumerate(tokens):
        sentinel = "%sT%d%s" % (SENTINEL_OPEN, n, SENTINEL_CLOSE)
        if sentinel not in out:
            raise PreservationViolation("sentinel %s (token %r) missing from translation"
                                        % (sentinel, tok.surface))
        out = out.replace(sentinel, tok.surface, 1)
    return out


def verify_preservation(source: str, translated: str) -> list[Violation]:
    """One Violation per protected source token absent from the translation.

    Occurrence-counting: two "$5" tokens in the source need two "$5"
    substrings in the translation.
    """
    violations = []
    budget: dict[str, int] = {}
    for tok in find_protected_tokens(source):
        if tok.surface not in budget:
            budget[tok.surface] = _count_occurrences(translated, tok.surface)
        if budget[tok.surface] > 0:
            budget[tok.surface] -= 1
        else:
            violations.append(Violation(surface=tok.surface,
                                        message="protected token %r missing" % tok.surface))
    return violations


def _count_occurrences(haystack: str, needle: str) -> int:
    count = start = 0
    while True:
        idx = haystack.find(needle, start)
        if idx < 0:
            return count
        count += 1
        start = idx + len(needle)


class IdentityProvider:
    """Returns input lines unchanged; for layout and plumbing tests."""

    name = "identity"

    def translate_lines(self, lines: list[str], source_lang: str, target_lang: str) -> list[str]:
        return list(lines)


class PseudoTranslationProvider:
    """Deterministic stand-in for a real MT model.

    Reverses word order and tags each line with the target language, e.g.
    "[ar: ...]"; sentinels ride along as ordinary words.
    """

    name = "pseudo"

    def translate_lines(self, lines: list[str], source_lang: str, target_lang: str) -> list[str]:
        tag = target_lang.split("-")[0]
        return ["[%s: %s]" % (tag, " ".join(reversed(line.split()))) for line in lines]


class HttpProvider:
    """POSTs {"lines": [...], "src": ..., "tgt": ...} and expects {"lines": [...]}.

    The API key is read from the environment; transport failures after the
    configured retries raise ProviderUnavailable.
    """

    name = "http"

    def __init__(self, endpoint: str, api_key_env: str = "DOCFORGE_TRANSLATE_KEY",
                 timeout: float = 30.0, retries: int = 2, post=None):
        if post is None:
            import requests
            post = requests.post
        self.endpoint = endpoint
        self.api_key_env = api_key_env
        self.timeout = timeout
        self.retries = retries
        self._post = post

    def translate_lines(self, lines: list[str], source_lang: str, target_lang: str) -> list[str]:
        headers = {}
        key = os.environ.get(self.api_key_env)
        if key:
            headers["Authorization"] = "Bearer %s" % key
        body = {"lines": list(lines), "src": source_lang, "tgt": target_lang}
        last_error = None
        for _ in range(self.retries + 1):
            try:
                resp = self._post(self.endpoint, json=body, headers=headers,
                                  timeout=self.timeout)
                resp.raise_for_status()
                data = resp.json()
                return [str(line) for line in data["lines"]]
            except Exception as exc:  # noqa: BLE001 - any transport failure retries
                last_error = exc
        raise ProviderUnavailable("provider %s unreachable: %s" % (self.endpoint, last_error))


def translate_paragraph(provider, request: TranslationRequest) -> TranslationResponse:
    """Translate one paragraph under the preservation constraints.

    Providers that merge lines are retried once with per-line calls; a
    second cardinality failure raises CardinalityViolation. Lost sentinels
    raise PreservationViolation. Responses that raise are never written to
    a corpus.
    """
    masked = []
    token_lists = []
    for line in request.lines:
        m, toks = protect_tokens(line)
        masked.append(m)
        token_lists.append(toks)

    out = provider.translate_lines(masked, request.source_lang, request.target_lang)
    if len(out) != len(masked):
        out = []
        for m in masked:
            single = provider.translate_lines([m], request.source_lang, request.target_lang)
            if len(single) != 1:
                raise CardinalityViolation(
                    "provider returned %d lines for 1 input after per-line retry" % len(single))
            out.append(single[0])

    restored = tuple(unprotect_tokens(line, toks) for line, toks in zip(out, token_lists))
    primary = request.target_lang.split("-")[0].lower()
    direction = "rtl" if primary in _RTL_LANGS else "ltr"
    return TranslationResponse(lines=restored, direction=direction)
