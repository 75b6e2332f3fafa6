"""Chart specs: the fifteen supported types, shape validation, sampling.

Series data is sampled to two decimals so annotations stay readable while
round-tripping exactly. Style is sampled independently of data; rendering
itself is deterministic given the spec.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..data import ARABIC_WORDS
from ..errors import InvalidSpec
from ..rng import SeededRng

CHART_TYPES = (
    "pie", "bar", "grouped_bar", "stacked_bar", "line", "area", "dot",
    "histogram", "scatter", "box", "violin", "heatmap", "dual_axis",
    "doughnut", "bubble",
)

# Category-indexed types share (categories, one value per series per category).
_CATEGORY_TYPES = {"pie", "doughnut", "bar", "dot", "grouped_bar",
                   "stacked_bar", "line", "area", "dual_axis", "heatmap"}
_SAMPLE_TYPES = {"histogram", "box", "violin"}
_POINT_TYPES = {"scatter", "bubble"}

THEMES = ("paper", "slate", "warm", "mint", "night")

THEME_COLORS = {
    "paper": ("#4363d8", "#e6194b", "#3cb44b", "#f58231", "#911eb4"),
    "slate": ("#34495e", "#7f8c8d", "#2980b9", "#16a085", "#8e44ad"),
    "warm": ("#c0392b", "#e67e22", "#f1c40f", "#d35400", "#a04000"),
    "mint": ("#1abc9c", "#27ae60", "#2ecc71", "#16a085", "#145a32"),
    "night": ("#9b59b6", "#3498db", "#e74c3c", "#95a5a6", "#f39c12"),
}

THEME_BACKGROUNDS = {
    "paper": "#ffffff",
    "slate": "#f4f6f7",
    "warm": "#fdf6ec",
    "mint": "#f2fbf7",
    "night": "#eceff4",
}

LABEL_ROTATIONS = (0.0, 0.0, 0.0, 30.0, 45.0, 90.0)

_TITLE_TOPICS = ("توزيع", "مقارنة", "تطور", "نسبة", "إجمالي", "معدل")


@dataclass(frozen=True)
class Series:
    name: str
    values: tuple[float, ...]


@dataclass(frozen=True)
class ChartStyle:
    theme: str = "paper"
    font_family: str = "default"
    background: str = "#ffffff"
    label_rotation: float = 0.0

    def colors(self) -> tuple[str, ...]:
        return THEME_COLORS.get(self.theme, THEME_COLORS["paper"])


@dataclass(frozen=True)
class ChartSpec:
    chart_type: str
    title: str
    series: tuple[Series, ...]
    categories: tuple[str, ...] | None = None
    style: ChartStyle = field(default_factory=ChartStyle)


def validate_chart_spec(spec: ChartSpec) -> None:
    """Shape rules per type; raises InvalidSpec on violation."""
    t = spec.chart_type
    if t not in CHART_TYPES:
        raise InvalidSpec("unknown chart type %r" % t)
    if not spec.series:
        raise InvalidSpec("chart needs at least one series")
    lengths = {len(s.values) for s in spec.series}
    if any(length == 0 for length in lengths):
        raise InvalidSpec("series must be non-empty")

    if t in _CATEGORY_TYPES:
        if not spec.categories:
            raise InvalidSpec("%s charts need category labels" % t)
        if lengths != {len(spec.categories)}:
            raise InvalidSpec("%s: series lengths must equal category count" % t)
    elif spec.categories is not None:
        raise InvalidSpec("%s charts take no categories" % t)

    if t in ("pie", "doughnut"):
        if len(spec.series) != 1:
            raise InvalidSpec("%s takes exactly one series" % t)
        if any(v < 0 for v in spec.series[0].values):
            raise InvalidSpec("%s values must be non-negative" % t)
        if sum(spec.series[0].values) <= 0:
            raise InvalidSpec("%s needs a positive total" % t)
    elif t in ("bar", "dot"):
        if len(spec.series) != 1:
            raise InvalidSpec("%s takes exactly one series" % t)
    elif t in ("grouped_bar", "stacked_bar", "line", "area"):
        if not (1 <= len(spec.series) <= 5):
            raise InvalidSpec("%s takes 1-5 series" % t)
        if t in ("stacked_bar", "area") and any(v < 0 for s in spec.series for v in s.values):
            raise InvalidSpec("%s values must be non-negative" % t)
    elif t == "dual_axis":
        if len(spec.series) != 2:
            raise InvalidSpec("dual_axis takes exactly two series")
    elif t == "heatmap":
        if len(lengths) != 1:
            raise InvalidSpec("heatmap matrix must be rectangular")
    elif t == "histogram":
        if len(spec.series) != 1:
            raise InvalidSpec("histogram takes exactly one sample series")
        if len(spec.series[0].values) < 2:
            raise InvalidSpec("histogram needs at least two samples")
    elif t in ("box", "violin"):
        if any(len(s.values) < 4 for s in spec.series):
            raise InvalidSpec("%s series need at least four samples" % t)
    elif t == "scatter":
        if len(spec.series) != 2 or [s.name for s in spec.series] != ["x", "y"]:
            raise InvalidSpec("scatter takes series x and y")
        if len(lengths) != 1:
            raise InvalidSpec("scatter x and y must have equal length")
    elif t == "bubble":
        if len(spec.series) != 3 or [s.name for s in spec.series] != ["x", "y", "size"]:
            raise InvalidSpec("bubble takes series x, y and size")
        if len(lengths) != 1:
            raise InvalidSpec("bubble series must have equal length")
        if any(v <= 0 for v in spec.series[2].values):
            raise InvalidSpec("bubble sizes must be positive")


def _round2(value: float) -> float:
    return round(value, 2)


def _values(rng: SeededRng, n: int, lo: float = 1.0, hi: float = 100.0,
            non_negative: bool = True) -> tuple[float, ...]:
    if not non_negative:
        lo = -hi
    return tuple(_round2(rng.uniform(lo, hi)) for _ in range(n))


def _categories(rng: SeededRng, n: int) -> tuple[str, ...]:
    words = rng.sample(ARABIC_WORDS, min(n, len(ARABIC_WORDS)))
    while len(words) < n:
        words.append("%s %d" % (rng.choice(ARABIC_WORDS), len(words)))
    return tuple(words)


def _series_names(rng: SeededRng, k: int) -> list[str]:
    pool = ["القيمة", "المعدل", "النسبة", "المجموع", "التغير"]
    names = rng.sample(pool, min(k, len(pool)))
    while len(names) < k:
        names.append("سلسلة %d" % len(names))
    return names


def generate_chart_spec(chart_type: str | None = None, rng: SeededRng | None = None) -> ChartSpec:
    """Sample a valid spec; type is uniform over all fifteen when unset."""
    if rng is None:
        raise ValueError("generate_chart_spec requires a SeededRng")
    t = chart_type or rng.choice(CHART_TYPES)
    if t not in CHART_TYPES:
        raise InvalidSpec("unknown chart type %r" % t)

    style = ChartStyle(theme=rng.choice(THEMES),
                       font_family=rng.choice(["default", "mono"]),
                       background=THEME_BACKGROUNDS[rng.choice(THEMES)],
                       label_rotation=rng.choice(LABEL_ROTATIONS))
    title = "%s %s %d" % (rng.choice(_TITLE_TOPICS), rng.choice(ARABIC_WORDS),
                          rng.randint(2000, 2030))

    if t in ("pie", "doughnut"):
        n = rng.randint(3, 7)
        series = (Series("value", _values(rng, n, lo=1.0)),)
        spec = ChartSpec(t, title, series, _categories(rng, n), style)
    elif t in ("bar", "dot"):
        n = rng.randint(3, 9)
        series = (Series("value", _values(rng, n)),)
        spec = ChartSpec(t, title, series, _categories(rng, n), style)
    elif t in ("grouped_bar", "stacked_bar", "line", "area"):
        n = rng.randint(3, 8)
        k = rng.randint(2, 4)
        names = _series_names(rng, k)
        series = tuple(Series(names[i], _values(rng, n)) for i in range(k))
        spec = ChartSpec(t, title, series, _categories(rng, n), style)
    elif t == "dual_axis":
        n = rng.randint(3, 8)
        names = _series_names(rng, 2)
        series = (Series(names[0], _values(rng, n, hi=100.0)),
                  Series(names[1], _values(rng, n, hi=1000.0)))
        spec = ChartSpec(t, title, series, _categories(rng, n), style)
    elif t == "heatmap":
        rows = rng.randint(3, 7)
        cols = rng.randint(3, 7)
        names = ["صف %d" % (i + 1) for i in range(rows)]
        series = tuple(Series(names[i], _values(rng, cols)) for i in range(rows))
        spec = ChartSpec(t, title, series, _categories(rng, cols), style)
    elif t == "histogram":
        n = rng.randint(40, 120)
        series = (Series("value", _values(rng, n, lo=0.0, hi=50.0)),)
        spec = ChartSpec(t, title, series, None, style)
    elif t in ("box", "violin"):
        k = rng.randint(1, 4)
        names = _series_names(rng, k)
        series = tuple(Series(names[i],
                              _values(rng, rng.randint(8, 30), lo=0.0, hi=80.0))
                       for i in range(k))
        spec = ChartSpec(t, title, series, None, style)
    elif t == "scatter":
        n = rng.randint(10, 40)
        series = (Series("x", _values(rng, n)), Series("y", _values(rng, n)))
        spec = ChartSpec(t, title, series, None, style)
    else:  # bubble
        n = rng.randint(6, 20)
        series = (Series("x", _values(rng, n)), Series("y", _values(rng, n)),
                  Series("size", tuple(_round2(rng.uniform(2.0, 30.0)) for _ in range(n))))
        spec = ChartSpec(t, title, series, None, style)

    validate_chart_spec(spec)
    return spec
