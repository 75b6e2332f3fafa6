"""Corpus configuration: counts per artifact class, knobs for every module,
provider selection, and output layout. Loadable from TOML."""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace

from ..arabic import REMOVAL_LEVELS, DiacritizationSpec
from ..errors import ConfigError
from ..layout import LayoutParams
from ..translation import (HttpProvider, IdentityProvider,
                           PseudoTranslationProvider)

ARTIFACT_CLASSES = ("crops", "pages", "tables_consistent", "tables_random",
                    "tables_latex", "charts")


@dataclass(frozen=True)
class ArtifactCounts:
    crops: int = 0
    pages: int = 0
    tables_consistent: int = 0
    tables_random: int = 0
    tables_latex: int = 0
    charts: int = 0

    def total(self) -> int:
        return sum(getattr(self, name) for name in ARTIFACT_CLASSES)

    def for_class(self, name: str) -> int:
        return getattr(self, name)


@dataclass(frozen=True)
class ProviderConfig:
    kind: str = "pseudo"  # identity | pseudo | http
    endpoint: str = ""
    api_key_env: str = "DOCFORGE_TRANSLATE_KEY"
    timeout: float = 30.0
    retries: int = 2
    target_lang: str = "ar"

    def build(self):
        if self.kind == "identity":
            return IdentityProvider()
        if self.kind == "pseudo":
            return PseudoTranslationProvider()
        if self.kind == "http":
            if not self.endpoint:
                raise ConfigError("http provider needs an endpoint")
            return HttpProvider(self.endpoint, api_key_env=self.api_key_env,
                                timeout=self.timeout, retries=self.retries)
        raise ConfigError("unknown provider kind %r" % self.kind)


@dataclass(frozen=True)
class DiacritizationMix:
    """Per-artifact transform sampling for crops."""

    levels: tuple[str, ...] = ("none", "light", "medium", "heavy")
    insertion_rate: float = 0.1
    eastern_numeral_fraction: float = 0.5

    def sample(self, rng) -> DiacritizationSpec:
        return DiacritizationSpec(removal_level=rng.choice(self.levels),
                                  insertion_rate=self.insertion_rate,
                                  eastern_numeral_fraction=self.eastern_numeral_fraction)


@dataclass(frozen=True)
class CorpusConfig:
    master_seed: int = 0
    counts: ArtifactCounts = field(default_factory=ArtifactCounts)
    output_root: str = "out"
    shard_size: int = 1000
    layout: LayoutParams = field(default_factory=LayoutParams)
    diacritization: DiacritizationMix = field(default_factory=DiacritizationMix)
    provider: ProviderConfig = field(default_factory=ProviderConfig)
    font_manifest: str | None = None      # None -> discover system fonts
    text_corpus: str | None = None        # None -> built-in sample sentences
    annotations_dir: str | None = None    # required when counts.pages > 0
    latex_dir: str | None = None          # required when counts.tables_latex > 0
    chart_data_dir: str | None = None     # optional .chart.txt data tables
    raster_classes: tuple[str, ...] = ("crops",)
    raster_scale: float = 1.0             # DPI multiplier for page/table/chart PNGs
    workers: int = 1


def validate_config(config: CorpusConfig) -> None:
    if config.shard_size < 1:
        raise ConfigError("shard_size must be >= 1")
    if any(config.counts.for_class(name) < 0 for name in ARTIFACT_CLASSES):
        raise ConfigError("artifact counts must be non-negative")
    if config.counts.pages > 0 and not config.annotations_dir:
        raise ConfigError("pages > 0 requires annotations_dir")
    if config.counts.tables_latex > 0 and not config.latex_dir:
        raise ConfigError("tables_latex > 0 requires latex_dir")
    for cls in config.raster_classes:
        if cls not in ARTIFACT_CLASSES:
            raise ConfigError("unknown raster class %r" % cls)
    for level in config.diacritization.levels:
        if level not in REMOVAL_LEVELS:
            raise ConfigError("unknown removal level %r" % level)
    if config.raster_scale <= 0:
        raise ConfigError("raster_scale must be positive")
    if config.workers < 1:
        raise ConfigError("workers must be >= 1")


def _load_toml(path: str) -> dict:
    try:
        import tomllib  # Python 3.11+
    except ImportError:
        import tomli as tomllib
    with open(path, "rb") as fh:
        return tomllib.load(fh)


def load_config(path: str) -> CorpusConfig:
    """Read a TOML config; unknown keys are rejected to catch typos."""
    if not os.path.exists(path):
        raise ConfigError("config file %s does not exist" % path)
    data = _load_toml(path)

    def take(section: dict, known: set, where: str):
        unknown = set(section) - known
        if unknown:
            raise ConfigError("unknown %s keys: %s" % (where, ", ".join(sorted(unknown))))

    take(data, {"master_seed", "output_root", "shard_size", "counts", "layout",
                "diacritization", "provider", "font_manifest", "text_corpus",
                "annotations_dir", "latex_dir", "chart_data_dir",
                "raster_classes", "raster_scale", "workers"}, "top-level")

    counts_data = data.get("counts", {})
    take(counts_data, set(ARTIFACT_CLASSES), "counts")
    counts = ArtifactCounts(**{k: int(v) for k, v in counts_data.items()})

    layout_data = data.get("layout", {})
    take(layout_data, {"overlap_threshold", "spacing_multiplier"}, "layout")
    try:
        layout = LayoutParams(**layout_data)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    dia_data = data.get("diacritization", {})
    take(dia_data, {"levels", "insertion_rate", "eastern_numeral_fraction"},
         "diacritization")
    dia = DiacritizationMix(
        levels=tuple(dia_data.get("levels", ("none", "light", "medium", "heavy"))),
        insertion_rate=float(dia_data.get("insertion_rate", 0.1)),
        eastern_numeral_fraction=float(dia_data.get("eastern_numeral_fraction", 0.5)))

    prov_data = data.get("provider", {})
    take(prov_data, {"kind", "endpoint", "api_key_env", "timeout", "retries",
                     "target_lang"}, "provider")
    provider = ProviderConfig(**prov_data)

    config = CorpusConfig(
        master_seed=int(data.get("master_seed", 0)),
        counts=counts,
        output_root=str(data.get("output_root", "out")),
        shard_size=int(data.get("shard_size", 1000)),
        layout=layout,
        diacritization=dia,
        provider=provider,
        font_manifest=data.get("font_manifest"),
        text_corpus=data.get("text_corpus"),
        annotations_dir=data.get("annotations_dir"),
        latex_dir=data.get("latex_dir"),
        chart_data_dir=data.get("chart_data_dir"),
        raster_classes=tuple(data.get("raster_classes", ("crops",))),
        raster_scale=float(data.get("raster_scale", 1.0)),
        workers=int(data.get("workers", 1)),
    )
    validate_config(config)
    return config


def with_overrides(config: CorpusConfig, seed: int | None = None,
                   only: str | None = None, workers: int | None = None) -> CorpusConfig:
    """CLI overrides: reseed, restrict to one class family, set workers."""
    if seed is not None:
        config = replace(config, master_seed=seed)
    if workers is not None:
        config = replace(config, workers=workers)
    if only:
        groups = {
            "crops": ("crops",),
            "pages": ("pages",),
            "tables": ("tables_consistent", "tables_random", "tables_latex"),
            "charts": ("charts",),
        }
        if only not in groups:
            raise ConfigError("--only must be one of %s" % ", ".join(groups))
        kept = groups[only]
        counts = ArtifactCounts(**{name: (config.counts.for_class(name)
                                          if name in kept else 0)
                                   for name in ARTIFACT_CLASSES})
        config = replace(config, counts=counts)
    validate_config(config)
    return config
