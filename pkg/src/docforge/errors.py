"""Exception hierarchy shared across docforge modules."""


class DocforgeError(Exception):
    """Base class for all docforge errors."""


# --- ingest ---------------------------------------------------------------

class MalformedInput(DocforgeError):
    """Input is not valid UTF-8 JSON."""


class SchemaViolation(DocforgeError):
    """Input parses but does not match the annotation schema."""


class GeometryError(DocforgeError):
    """A bounding box violates geometric invariants (size, page bounds)."""


# --- layout ---------------------------------------------------------------

class EmptyPage(DocforgeError):
    """Operation requires at least one OCR line on the page."""


# --- translation ----------------------------------------------------------

class ProviderUnavailable(DocforgeError):
    """Translation provider could not be reached."""


class CardinalityViolation(DocforgeError):
    """Provider merged or split lines instead of returning one per input."""


class PreservationViolation(DocforgeError):
    """A protected token was lost or altered by translation."""


# --- fonts / reflow -------------------------------------------------------

class FontLoadError(DocforgeError):
    """A font file could not be loaded or its character map read."""


class NoCoveringFont(DocforgeError):
    """No font in the chain covers all codepoints of the text."""

    def __init__(self, uncovered, message=None):
        self.uncovered = sorted(uncovered)
        if message is None:
            cps = ", ".join("U+%04X" % cp for cp in self.uncovered[:8])
            message = "no font covers codepoints: %s" % cps
        super().__init__(message)


class Overflow(DocforgeError):
    """Text does not fit its box even at the minimum font size."""


class OverflowUnsplittable(DocforgeError):
    """A single word is wider than the widest box at minimum size."""


# --- render ---------------------------------------------------------------

class MissingBackground(DocforgeError):
    """original_scan mode requested but the background image is unusable."""


class RenderFailure(DocforgeError):
    """Rendering backend failed to produce an artifact."""


# --- tables ---------------------------------------------------------------

class SpecViolation(DocforgeError):
    """A table spec or content grid violates its invariants."""


class UnsupportedConstruct(DocforgeError):
    """LaTeX source uses a construct outside the supported subset."""


class ParseError(DocforgeError):
    """Structured text (LaTeX or HTML) could not be parsed."""


class NoTableFound(DocforgeError):
    """HTML input contains no table element."""


# --- charts ---------------------------------------------------------------

class InvalidSpec(DocforgeError):
    """A chart spec violates the shape rules for its type."""


# --- metrics --------------------------------------------------------------

class EmptyReference(DocforgeError):
    """Reference string is empty; error rates are undefined."""


# --- pipeline -------------------------------------------------------------

class ConfigError(DocforgeError):
    """Corpus configuration is invalid or incomplete."""


class PipelineIoError(DocforgeError):
    """Output tree could not be written or read back."""
