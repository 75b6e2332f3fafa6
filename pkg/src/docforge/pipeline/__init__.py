from ..rng import SeededRng, derive_stream, stream_id_for
from .config import (ARTIFACT_CLASSES, ArtifactCounts, CorpusConfig,
                     DiacritizationMix, ProviderConfig, load_config,
                     validate_config, with_overrides)
from .manifest import ManifestRecord, SkipRecord, digest_bytes, digest_text
from .run import build_context, generate_artifact, run_pipeline, table_spec_for_grid

__all__ = [
    "ARTIFACT_CLASSES", "ArtifactCounts", "CorpusConfig", "DiacritizationMix",
    "ManifestRecord", "ProviderConfig", "SeededRng", "SkipRecord",
    "build_context", "derive_stream", "digest_bytes", "digest_text",
    "generate_artifact", "load_config", "run_pipeline", "stream_id_for",
    "table_spec_for_grid", "validate_config", "with_overrides",
]
