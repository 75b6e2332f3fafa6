"""Manifest records: one JSON line per artifact plus a trailing summary.

Serialization is canonical (sorted keys, compact separators, no
timestamps), so identical corpora produce byte-identical manifests.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass


@dataclass(frozen=True)
class ManifestRecord:
    artifact_id: str
    artifact_class: str
    image_paths: tuple[str, ...]   # relative to the output root
    ground_truth_path: str
    seed: int
    stream_id: int
    generator_version: str
    spec_digest: str               # digest of the generation parameters
    content_digest: str            # digest of all written bytes


@dataclass(frozen=True)
class SkipRecord:
    artifact_id: str
    artifact_class: str
    reason: str


def record_line(record) -> str:
    payload = asdict(record)
    if isinstance(record, SkipRecord):
        payload["skipped"] = True
    return json.dumps(payload, ensure_ascii=False, sort_keys=True,
                      separators=(",", ":")) + "\n"


def summary_line(counts: dict, skipped: dict, generator_version: str) -> str:
    payload = {"summary": True, "counts": counts, "skipped": skipped,
               "generator_version": generator_version}
    return json.dumps(payload, ensure_ascii=False, sort_keys=True,
                      separators=(",", ":")) + "\n"


def digest_bytes(*chunks: bytes) -> str:
    h = hashlib.sha256()
    for chunk in chunks:
        h.update(len(chunk).to_bytes(8, "big"))
        h.update(chunk)
    return h.hexdigest()


def digest_text(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()
