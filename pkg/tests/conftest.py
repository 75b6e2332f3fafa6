import random

import pytest

from docforge.fonts import TextMeasurer, default_font_assets
from docforge.ingest import BoundingBox, OcrLine, PageAnnotation


@pytest.fixture(scope="session")
def fonts():
    return list(default_font_assets())


@pytest.fixture(scope="session")
def measurer():
    return TextMeasurer()


def make_line(line_id, x, y, w, h, text="نص"):
    return OcrLine(line_id=str(line_id), text=text, bbox=BoundingBox(x, y, w, h))


def make_page(lines, width=1000.0, height=1400.0, index=0):
    return PageAnnotation(page_index=index, width=width, height=height,
                          background_ref=None, lines=tuple(lines))


def random_page(rnd: random.Random, n_lines: int, width=1000.0, height=1400.0):
    """Synthetic page mixing column-like stacks with scattered lines.

    Produces the noisy geometry the paragraph grouper has to cope with:
    aligned stacks, offset stacks, same-row columns, and isolated lines.
    """
    lines = []
    i = 0
    while i < n_lines:
        style = rnd.random()
        if style < 0.7:
            # a stack of lines sharing a column
            stack = min(n_lines - i, rnd.randint(2, 6))
            x = rnd.uniform(0, width * 0.6)
            w = rnd.uniform(width * 0.15, width * 0.38)
            y = rnd.uniform(0, height * 0.7)
            line_h = rnd.uniform(12, 24)
            gap = rnd.uniform(line_h * 0.2, line_h * 1.6)
            for _ in range(stack):
                jitter = rnd.uniform(-w * 0.2, w * 0.2)
                lw = min(max(20.0, w + jitter), width - x)
                if y + line_h > height:
                    break
                lines.append(make_line(i, x, y, lw, line_h))
                i += 1
                y += line_h + gap
        else:
            # isolated line anywhere
            w = rnd.uniform(40, width * 0.5)
            h = rnd.uniform(10, 26)
            x = rnd.uniform(0, width - w)
            y = rnd.uniform(0, height - h)
            lines.append(make_line(i, x, y, w, h))
            i += 1
    return make_page(lines[:n_lines], width=width, height=height)
