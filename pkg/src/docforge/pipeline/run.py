"""Corpus-scale generation: shard planning, per-artifact streams, resume.

Every artifact draws all randomness from derive_stream(master_seed,
artifact_id), so scheduling order and worker count never change output.
A shard's manifest fragment is written atomically after its files; a
present fragment marks the shard complete and lets interrupted runs
resume without regenerating it.
"""

from __future__ import annotations

import glob
import json
import logging
import os
import unicodedata
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace as dc_replace

from .. import GENERATOR_VERSION
from ..arabic import apply_spec
from ..charts import (ChartStyle, generate_chart_spec, parse_chart_annotation,
                      render_chart)
from ..charts.spec import (LABEL_ROTATIONS, THEME_BACKGROUNDS, THEMES,
                           validate_chart_spec)
from ..data import SAMPLE_SENTENCES
from ..errors import ConfigError, DocforgeError, PipelineIoError
from ..fonts import (TextMeasurer, arabic_capable, default_font_assets,
                     load_font_manifest)
from ..ingest import parse_ocr_annotations
from ..layout import group_paragraphs
from ..reflow import allocate_segments, fit_assignment
from ..render import PageStyle, render_page, render_text_crop
from ..rng import derive_stream
from ..tables import (MergeSpan, TableGroundTruth, TableSpec, TableStyle,
                      cell_texts, generate_table_content, generate_table_spec,
                      latex_table_to_html, normalize_table_html,
                      parse_table_grid, render_table, replace_cell_texts,
                      table_to_html)
from ..translation import TranslationRequest, translate_paragraph
from .config import ARTIFACT_CLASSES, CorpusConfig, validate_config
from .manifest import (ManifestRecord, SkipRecord, digest_bytes, digest_text,
                       record_line, summary_line)

logger = logging.getLogger(__name__)

_GT_SUFFIX = {
    "crops": ".gt.txt",
    "pages": ".gt.txt",
    "tables_consistent": ".gt.html",
    "tables_random": ".gt.html",
    "tables_latex": ".gt.html",
    "charts": ".chart.txt",
}


@dataclass
class PipelineContext:
    """Read-only assets shared by all workers."""

    config: CorpusConfig
    assets: list
    measurer: TextMeasurer
    provider: object
    corpus_lines: list[str]
    source_pages: list  # (DocumentAnnotation, PageAnnotation)
    latex_sources: list[str]
    chart_tables: list  # preparsed user-supplied ChartSpecs (data only)


def _load_corpus_lines(config: CorpusConfig) -> list[str]:
    if config.text_corpus is None:
        return list(SAMPLE_SENTENCES)
    try:
        with open(config.text_corpus, encoding="utf-8") as fh:
            lines = [unicodedata.normalize("NFC", line.strip())
                     for line in fh if line.strip()]
    except OSError as exc:
        raise ConfigError("cannot read text corpus %s: %s" % (config.text_corpus, exc))
    if not lines:
        raise ConfigError("text corpus %s is empty" % config.text_corpus)
    return lines


def _load_source_pages(config: CorpusConfig) -> list:
    if config.counts.pages <= 0:
        return []
    paths = sorted(glob.glob(os.path.join(config.annotations_dir, "*.json")))
    if not paths:
        raise ConfigError("annotations_dir %s has no .json files" % config.annotations_dir)
    pages = []
    for path in paths:
        with open(path, "rb") as fh:
            doc = parse_ocr_annotations(fh.read())
        for page in doc.pages:
            if page.lines:
                pages.append((doc, page))
    if not pages:
        raise ConfigError("annotation files contain no non-empty pages")
    return pages


def _load_latex_sources(config: CorpusConfig) -> list[str]:
    if config.counts.tables_latex <= 0:
        return []
    paths = sorted(glob.glob(os.path.join(config.latex_dir, "*.tex")))
    if not paths:
        raise ConfigError("latex_dir %s has no .tex files" % config.latex_dir)
    out = []
    for path in paths:
        with open(path, encoding="utf-8") as fh:
            out.append(fh.read())
    return out


def _load_chart_tables(config: CorpusConfig) -> list:
    """Optional pre-supplied chart data: .chart.txt annotation files."""
    if not config.chart_data_dir:
        return []
    paths = sorted(glob.glob(os.path.join(config.chart_data_dir, "*.chart.txt")))
    specs = []
    for path in paths:
        with open(path, encoding="utf-8") as fh:
            specs.append(parse_chart_annotation(fh.read()))
    if not specs:
        raise ConfigError("chart_data_dir %s has no .chart.txt files"
                          % config.chart_data_dir)
    return specs


def build_context(config: CorpusConfig) -> PipelineContext:
    validate_config(config)
    assets = (load_font_manifest(config.font_manifest) if config.font_manifest
              else list(default_font_assets()))
    if not arabic_capable(assets):
        raise ConfigError("font manifest provides no Arabic-capable font")
    return PipelineContext(
        config=config,
        assets=assets,
        measurer=TextMeasurer(),
        provider=config.provider.build(),
        corpus_lines=_load_corpus_lines(config),
        source_pages=_load_source_pages(config),
        latex_sources=_load_latex_sources(config),
        chart_tables=_load_chart_tables(config),
    )


def translate_table_cells(gt: TableGroundTruth, provider, source_lang: str,
                          target_lang: str) -> TableGroundTruth:
    """Adapt table content through the translation provider.

    Structure is preserved exactly: only cell texts change, empty cells
    stay empty, and the logical grid of the result equals the input's.
    Preservation or cardinality failures propagate, so failing tables are
    skipped rather than written.
    """
    texts = cell_texts(gt.html)
    nonempty = [i for i, t in enumerate(texts) if t.strip()]
    if nonempty:
        request = TranslationRequest(
            lines=tuple(texts[i] for i in nonempty),
            contiguous=tuple([False] * (len(nonempty) - 1)),
            source_lang=source_lang, target_lang=target_lang)
        response = translate_paragraph(provider, request)
        for i, line in zip(nonempty, response.lines):
            texts[i] = line
    html = normalize_table_html(replace_cell_texts(gt.html, texts))
    out = TableGroundTruth(html=html, grid=parse_table_grid(html))
    if out.grid != gt.grid:
        raise PipelineIoError("translation altered table structure")
    return out


def table_spec_for_grid(gt: TableGroundTruth) -> TableSpec:
    """Minimal consistent-style spec matching a parsed grid (arXiv look)."""
    spans: dict[tuple[int, int], tuple[int, int]] = {}
    for r, row in enumerate(gt.grid):
        for c, owner in enumerate(row):
            rs, cs = spans.get(owner, (0, 0))
            spans[owner] = (max(rs, r - owner[0] + 1), max(cs, c - owner[1] + 1))
    merges = tuple(MergeSpan(r0, c0, rs, cs)
                   for (r0, c0), (rs, cs) in sorted(spans.items())
                   if rs > 1 or cs > 1)
    style = TableStyle(font_family="default", font_size=12, text_color="#111111",
                       header_background="#ffffff", border_color="#333333")
    return TableSpec(rows=gt.rows, cols=gt.cols, merges=merges,
                     header_rows=0, footer_rows=0, caption=None,
                     style_mode="consistent", direction="ltr", table_style=style)


def _page_assignments(ctx: PipelineContext, page, rng):
    """Group, translate, and reflow one page; returns fitted assignments."""
    paragraphs = group_paragraphs(page, ctx.config.layout, direction="ltr")
    by_id = {ln.line_id: ln for ln in page.lines}
    target = ctx.config.provider.target_lang
    assignments = []
    fonts = arabic_capable(ctx.assets)
    for para in paragraphs:
        lines = [by_id[lid] for lid in para.line_ids]
        request = TranslationRequest(
            lines=tuple(ln.text for ln in lines),
            contiguous=tuple([True] * (len(lines) - 1)),
            source_lang="en", target_lang=target)
        response = translate_paragraph(ctx.provider, request)
        translated = " ".join(response.lines)
        font = rng.choice(fonts)
        allocated = allocate_segments(para, lines, translated, font=font,
                                      measurer=ctx.measurer,
                                      direction=response.direction)
        for asg in allocated:
            assignments.append(fit_assignment(asg, by_id[asg.line_id].bbox,
                                              ctx.measurer))
    return assignments


def generate_artifact(ctx: PipelineContext, artifact_class: str, artifact_id: str):
    """Build one artifact; all randomness comes from its derived stream."""
    rng = derive_stream(ctx.config.master_seed, artifact_id)
    raster = artifact_class in ctx.config.raster_classes
    arabic_fonts = arabic_capable(ctx.assets)

    if artifact_class == "crops":
        source = rng.choice(ctx.corpus_lines)
        spec = ctx.config.diacritization.sample(rng)
        text = apply_spec(source, spec, rng)
        style = PageStyle.sample(rng, arabic_fonts)
        art = render_text_crop(text, style, rng, measurer=ctx.measurer,
                               artifact_id=artifact_id)
        spec_digest = digest_text(json.dumps(
            {"source": source, "level": spec.removal_level,
             "insert": spec.insertion_rate, "eastern": spec.eastern_numeral_fraction},
            ensure_ascii=False, sort_keys=True))
        return art, spec_digest

    if artifact_class == "pages":
        doc, page = rng.choice(ctx.source_pages)
        style = PageStyle.sample(rng, arabic_fonts,
                                 background_mode=("original_scan"
                                                  if page.background_ref else "plain"))
        assignments = _page_assignments(ctx, page, rng)
        art = render_page(page, assignments, style, rng,
                          background_root=ctx.config.annotations_dir,
                          raster=raster, raster_scale=ctx.config.raster_scale,
                          artifact_id=artifact_id)
        spec_digest = digest_text("%s:%d" % (doc.doc_id, page.page_index))
        return art, spec_digest

    if artifact_class in ("tables_consistent", "tables_random"):
        mode = "consistent" if artifact_class == "tables_consistent" else "random"
        spec = generate_table_spec(mode, rng)
        content = generate_table_content(spec, rng)
        gt = table_to_html(spec, content)
        art = render_table(gt, spec, rng, content=content, assets=ctx.assets,
                           measurer=ctx.measurer, raster=raster,
                           raster_scale=ctx.config.raster_scale,
                           artifact_id=artifact_id)
        return art, digest_text(gt.html)

    if artifact_class == "tables_latex":
        src = rng.choice(ctx.latex_sources)
        gt = translate_table_cells(latex_table_to_html(src), ctx.provider,
                                   "en", ctx.config.provider.target_lang)
        spec = table_spec_for_grid(gt)
        content_list = cell_texts(gt.html)
        content = [["" for _ in range(spec.cols)] for _ in range(spec.rows)]
        from ..tables import anchors
        for (r, c, _, _), text in zip(anchors(spec), content_list):
            content[r][c] = text
        art = render_table(gt, spec, rng, content=content, assets=ctx.assets,
                           measurer=ctx.measurer, raster=raster,
                           raster_scale=ctx.config.raster_scale,
                           artifact_id=artifact_id)
        art.stamp(rng)
        return art, digest_text(gt.html)

    if artifact_class == "charts":
        if ctx.chart_tables:
            base = rng.choice(ctx.chart_tables)
            style = ChartStyle(theme=rng.choice(THEMES),
                               font_family=rng.choice(["default", "mono"]),
                               background=THEME_BACKGROUNDS[rng.choice(THEMES)],
                               label_rotation=rng.choice(LABEL_ROTATIONS))
            spec = dc_replace(base, style=style)
            validate_chart_spec(spec)
        else:
            spec = generate_chart_spec(None, rng)
        art = render_chart(spec, assets=ctx.assets, measurer=ctx.measurer,
                           raster=raster, raster_scale=ctx.config.raster_scale,
                           artifact_id=artifact_id)
        art.stamp(rng)
        return art, digest_text(art.ground_truth.decode("utf-8"))

    raise ConfigError("unknown artifact class %r" % artifact_class)


def _artifact_files(artifact_class: str, artifact_id: str, art) -> dict[str, bytes]:
    files = {}
    if art.svg is not None:
        files[artifact_id + ".svg"] = art.svg.encode("utf-8")
    if art.png is not None:
        files[artifact_id + ".png"] = art.png
    files[artifact_id + _GT_SUFFIX[artifact_class]] = art.ground_truth
    return files


def _shards(count: int, shard_size: int) -> list[tuple[int, int, int]]:
    """(shard_index, start, end) triples covering range(count)."""
    out = []
    s = 0
    start = 0
    while start < count:
        end = min(count, start + shard_size)
        out.append((s, start, end))
        s += 1
        start = end
    return out


def _generate_one(ctx, artifact_class, artifact_id):
    try:
        art, spec_digest = generate_artifact(ctx, artifact_class, artifact_id)
        files = _artifact_files(artifact_class, artifact_id, art)
        return artifact_id, art, spec_digest, files, None
    except DocforgeError as exc:
        reason = "%s: %s" % (type(exc).__name__, exc)
        logger.warning("skipping %s: %s", artifact_id, reason)
        return artifact_id, None, None, None, reason


def _run_shard(ctx: PipelineContext, artifact_class: str, shard_index: int,
               start: int, end: int) -> str:
    """Generate one shard and return its manifest fragment text."""
    config = ctx.config
    shard_dir = os.path.join(config.output_root, artifact_class,
                             "shard-%04d" % shard_index)
    os.makedirs(shard_dir, exist_ok=True)
    ids = ["%s-%06d" % (artifact_class, i) for i in range(start, end)]

    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(
                lambda aid: _generate_one(ctx, artifact_class, aid), ids))
    else:
        results = [_generate_one(ctx, artifact_class, aid) for aid in ids]

    lines = []
    for artifact_id, art, spec_digest, files, failure in results:
        if failure is not None:
            lines.append(record_line(SkipRecord(artifact_id=artifact_id,
                                                artifact_class=artifact_class,
                                                reason=failure)))
            continue
        rel_dir = os.path.join(artifact_class, "shard-%04d" % shard_index)
        image_paths = []
        gt_path = ""
        for name in sorted(files):
            with open(os.path.join(shard_dir, name), "wb") as fh:
                fh.write(files[name])
            rel = os.path.join(rel_dir, name)
            if name.endswith(".svg") or name.endswith(".png"):
                image_paths.append(rel)
            else:
                gt_path = rel
        content_digest = digest_bytes(*(files[name] for name in sorted(files)))
        lines.append(record_line(ManifestRecord(
            artifact_id=artifact_id,
            artifact_class=artifact_class,
            image_paths=tuple(image_paths),
            ground_truth_path=gt_path,
            seed=art.seed if art.seed is not None else config.master_seed,
            stream_id=art.stream_id or 0,
            generator_version=GENERATOR_VERSION,
            spec_digest=spec_digest,
            content_digest=content_digest)))
    return "".join(lines)


def _fragment_path(config: CorpusConfig, artifact_class: str, shard_index: int) -> str:
    return os.path.join(config.output_root, artifact_class,
                        "shard-%04d.manifest.jsonl" % shard_index)


def run_pipeline(config: CorpusConfig, stop_after_shards: int | None = None) -> str:
    """Generate the configured corpus; returns the manifest path.

    Completed shards (fragment present) are reused on re-runs, so an
    interrupted run resumed with the same config converges to the same
    manifest as an uninterrupted one. `stop_after_shards` checkpoints the
    run after that many shards (used to exercise resume).
    """
    ctx = build_context(config)
    os.makedirs(config.output_root, exist_ok=True)

    done = 0
    fragments: list[str] = []
    for artifact_class in ARTIFACT_CLASSES:
        count = config.counts.for_class(artifact_class)
        if count == 0:
            continue
        for shard_index, start, end in _shards(count, config.shard_size):
            frag_path = _fragment_path(config, artifact_class, shard_index)
            if not os.path.exists(frag_path):
                if stop_after_shards is not None and done >= stop_after_shards:
                    raise PipelineIoError("checkpoint: stopped after %d shards" % done)
                fragment = _run_shard(ctx, artifact_class, shard_index, start, end)
                tmp = frag_path + ".tmp"
                with open(tmp, "w", encoding="utf-8") as fh:
                    fh.write(fragment)
                os.replace(tmp, frag_path)  # atomic completion marker
                done += 1
            fragments.append(frag_path)

    counts: dict[str, int] = {}
    skipped: dict[str, int] = {}
    body = []
    for frag_path in fragments:
        with open(frag_path, encoding="utf-8") as fh:
            for line in fh:
                body.append(line)
                rec = json.loads(line)
                cls = rec["artifact_class"]
                if rec.get("skipped"):
                    skipped[cls] = skipped.get(cls, 0) + 1
                else:
                    counts[cls] = counts.get(cls, 0) + 1

    manifest_path = os.path.join(config.output_root, "manifest.jsonl")
    tmp = manifest_path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.writelines(body)
        fh.write(summary_line(counts, skipped, GENERATOR_VERSION))
    os.replace(tmp, manifest_path)
    return manifest_path
