"""Acceptance suite: one test per release criterion, at pinned tolerances.

Run with `pytest tests/test_acceptance.py -s` to see one PASS/FAIL line per
criterion. Oracles (union-find grouping, quadratic DP, exhaustive tree
edit search) live in oracles.py and are independent of the library code
they check.
"""

import io
import random
import time
from collections import Counter

import pytest
from PIL import Image, ImageChops

from docforge.arabic import DIACRITICS, DiacritizationSpec, apply_spec, strip_diacritics, substitute_numerals
from docforge.charts import (CHART_TYPES, ChartSpec, Series, generate_chart_spec,
                             parse_chart_annotation, render_chart,
                             serialize_chart_annotation)
from docforge.errors import Overflow, OverflowUnsplittable
from docforge.fonts import TextMeasurer, arabic_capable, default_font_assets
from docforge.ingest import BoundingBox
from docforge.layout import Paragraph, group_paragraphs
from docforge.metrics import _rename_cost, levenshtein, parse_table_tree, teds, tree_edit_distance
from docforge.pipeline import ArtifactCounts, CorpusConfig, ProviderConfig, run_pipeline
from docforge.reflow import allocate_segments, apply_bidi_controls, fit_assignment, isolates_balanced
from docforge.render import CROP_MARGIN, PageStyle, render_text_crop
from docforge.rng import SeededRng, derive_stream
from docforge.tables import (anchors, cell_texts, generate_table_content,
                             generate_table_spec, logical_grid,
                             normalize_table_html, parse_table_grid, table_to_html)
from docforge.translation import (PseudoTranslationProvider, TranslationRequest,
                                  translate_paragraph, verify_preservation)

from conftest import make_line, random_page
from oracles import brute_force_paragraph_partition, dp_levenshtein, exhaustive_tree_edit_distance
from test_metrics import _random_tree
from test_tables import _inject_noise


def _report(number: int, name: str, ok: bool, detail: str):
    print("[criterion %2d] %s — %s: %s" % (number, "PASS" if ok else "FAIL", name, detail))
    assert ok, "criterion %d (%s): %s" % (number, name, detail)


def test_criterion_01_layout_oracle_equivalence():
    rnd = random.Random(20240501)
    start = time.perf_counter()
    mismatches = 0
    for _ in range(1000):
        page = random_page(rnd, rnd.randint(5, 60))
        ours = {frozenset(p.line_ids) for p in group_paragraphs(page)}
        oracle = brute_force_paragraph_partition(page)
        if ours != oracle:
            mismatches += 1
    elapsed = time.perf_counter() - start
    _report(1, "layout oracle equivalence",
            mismatches == 0 and elapsed < 10.0,
            "%d mismatches over 1000 pages in %.2fs (limit 10s)" % (mismatches, elapsed))


def test_criterion_02_metric_oracles():
    rnd = random.Random(20240502)
    alphabet = "abcd كتب ١٢٣xyz"
    wer_cer_bad = 0
    for _ in range(10_000):
        a = "".join(rnd.choice(alphabet) for _ in range(rnd.randint(0, 12)))
        b = "".join(rnd.choice(alphabet) for _ in range(rnd.randint(0, 12)))
        if levenshtein(a, b) != dp_levenshtein(a, b):
            wer_cer_bad += 1
        ta, tb = a.split(), b.split()
        if levenshtein(ta, tb) != dp_levenshtein(ta, tb):
            wer_cer_bad += 1

    trees = [_random_tree(rnd, 8) for _ in range(25)]
    teds_worst = 0.0
    for t1 in trees:
        for t2 in trees:
            ours = tree_edit_distance(t1, t2)
            oracle = exhaustive_tree_edit_distance(
                t1, t2, lambda x, y: _rename_cost(x, y, False))
            teds_worst = max(teds_worst, abs(ours - oracle))

    rng = SeededRng(20240502, 1)
    selfsim_bad = 0
    for i in range(1000):
        spec = generate_table_spec("consistent" if i % 2 else "random", rng)
        tree = parse_table_tree(table_to_html(spec, generate_table_content(spec, rng)).html)
        if teds(tree, tree) != 1.0:
            selfsim_bad += 1

    _report(2, "metric oracles",
            wer_cer_bad == 0 and teds_worst <= 1e-9 and selfsim_bad == 0,
            "edit-distance mismatches=%d; max |teds-oracle|=%.2e (tol 1e-9); "
            "self-similarity failures=%d/1000" % (wer_cer_bad, teds_worst, selfsim_bad))


def test_criterion_03_table_round_trip():
    rng = SeededRng(20240503, 0)
    grid_bad = 0
    conservation_bad = 0
    for i in range(5000):
        mode = "consistent" if i % 2 == 0 else "random"
        spec = generate_table_spec(mode, rng)
        content = generate_table_content(spec, rng)
        gt = table_to_html(spec, content)
        if parse_table_grid(gt.html) != logical_grid(spec):
            grid_bad += 1
        if sum(rs * cs for (_, _, rs, cs) in anchors(spec)) != spec.rows * spec.cols:
            conservation_bad += 1
    _report(3, "table round-trip",
            grid_bad == 0 and conservation_bad == 0,
            "grid mismatches=%d, conservation failures=%d over 5000 specs"
            % (grid_bad, conservation_bad))


def test_criterion_04_normalization():
    rng = SeededRng(20240504, 0)
    rnd = random.Random(20240504)
    idempotence_bad = 0
    multiset_bad = 0
    for i in range(1000):
        spec = generate_table_spec("consistent" if i % 2 else "random", rng)
        gt = table_to_html(spec, generate_table_content(spec, rng))
        noisy = _inject_noise(gt.html, rnd)
        once = normalize_table_html(noisy)
        if normalize_table_html(once) != once:
            idempotence_bad += 1
        if sorted(cell_texts(once)) != sorted(cell_texts(gt.html)):
            multiset_bad += 1
    _report(4, "normalization idempotent + text-preserving",
            idempotence_bad == 0 and multiset_bad == 0,
            "idempotence failures=%d, multiset failures=%d over 1000 noisy inputs"
            % (idempotence_bad, multiset_bad))


def test_criterion_05_chart_fidelity():
    rng = SeededRng(20240505, 0)
    round_trip_bad = 0
    seen = Counter()
    for _ in range(1000):
        spec = generate_chart_spec(None, rng)
        seen[spec.chart_type] += 1
        parsed = parse_chart_annotation(serialize_chart_annotation(spec).text())
        if (parsed.title, parsed.chart_type, parsed.series, parsed.categories) != \
                (spec.title, spec.chart_type, spec.series, spec.categories):
            round_trip_bad += 1
    all_types = set(seen) == set(CHART_TYPES)

    from test_charts import wedge_spans
    fixture = ChartSpec("pie", "fixture", (Series("value", (1.0, 1.0, 2.0)),),
                        ("a", "b", "c"))
    spans = wedge_spans(render_chart(fixture).svg)
    angle_err = max(abs(got - want) for got, want in zip(spans, (90.0, 90.0, 180.0)))

    _report(5, "chart fidelity",
            round_trip_bad == 0 and all_types and angle_err <= 0.1,
            "round-trip failures=%d/1000; all 15 types covered=%s; "
            "pie fixture max angle error=%.4f deg (tol 0.1)"
            % (round_trip_bad, all_types, angle_err))


def test_criterion_06_render_ground_truth():
    fonts = arabic_capable(default_font_assets())
    measurer = TextMeasurer()
    corpus = [
        "ذَهَبَ الطالِبُ إلى المَكتَبَةِ يوم 14 مارس",
        "ارتفعت الأرباح بنسبة 25 في المئة عام 2024",
        "العِلْمُ نُورٌ والجَهْلُ ظَلامٌ",
        "سجلت المبيعات 4780 وحدة خلال الربع الأول",
        "كَتَبَ المُعَلِّمُ الدَّرسَ عَلى السَّبُّورَةِ",
    ]
    sidecar_bad = 0
    margin_bad = 0
    for i in range(1000):
        rng = derive_stream(20240506, "accept-crop-%04d" % i)
        spec = DiacritizationSpec(
            removal_level=rng.choice(["none", "light", "medium", "heavy"]),
            insertion_rate=rng.choice([0.0, 0.2, 0.5]),
            eastern_numeral_fraction=rng.choice([0.0, 0.5, 1.0]))
        text = apply_spec(rng.choice(corpus), spec, rng)
        style = PageStyle.sample(rng, fonts)
        art = render_text_crop(text, style, rng, measurer=measurer)
        if art.ground_truth != text.encode("utf-8"):
            sidecar_bad += 1
        img = Image.open(io.BytesIO(art.png)).convert("RGB")
        box = ImageChops.difference(img, Image.new("RGB", img.size, "#ffffff")).getbbox()
        margins = (box[0], box[1], img.width - box[2], img.height - box[3])
        if any(m > CROP_MARGIN for m in margins):
            margin_bad += 1
    _report(6, "render ground truth",
            sidecar_bad == 0 and margin_bad == 0,
            "sidecar mismatches=%d/1000, margin violations=%d/1000 (limit %dpx)"
            % (sidecar_bad, margin_bad, CROP_MARGIN))


def test_criterion_07_bidi_and_fit():
    rnd = random.Random(20240507)
    pool = "ابتثج dewqz 0123456789٠١٢٣ $%،.:-() كلمة نص U.S."
    unbalanced = 0
    for _ in range(10_000):
        text = "".join(rnd.choice(pool) for _ in range(rnd.randint(0, 60)))
        direction = rnd.choice(["ltr", "rtl"])
        if not isolates_balanced(apply_bidi_controls(text, direction)):
            unbalanced += 1

    fonts = arabic_capable(default_font_assets())
    measurer = TextMeasurer()
    words = ["كلمة", "نص", "تجربة", "بيانات", "سطر", "فقرة", "قيمة", "٢٥"]
    fit_violations = 0
    emitted = 0
    skipped = 0
    for i in range(300):
        rng = SeededRng(20240507, i)
        n_lines = rng.randint(1, 5)
        lines = [make_line("l%d" % k, rng.uniform(0, 80), 40 * k,
                           rng.uniform(120, 520), rng.uniform(16, 40))
                 for k in range(n_lines)]
        x1 = min(ln.bbox.x for ln in lines)
        y1 = min(ln.bbox.y for ln in lines)
        para = Paragraph(paragraph_id=0, reading_order=0,
                         line_ids=tuple(ln.line_id for ln in lines),
                         union_bbox=BoundingBox(
                             x1, y1,
                             max(ln.bbox.x2 for ln in lines) - x1,
                             max(ln.bbox.y2 for ln in lines) - y1))
        text = " ".join(rng.choice(words) for _ in range(rng.randint(1, 24)))
        font = rng.choice(fonts)
        by_id = {ln.line_id: ln for ln in lines}
        try:
            allocated = allocate_segments(para, lines, text, font=font,
                                          measurer=measurer)
            fitted = [fit_assignment(a, by_id[a.line_id].bbox, measurer)
                      for a in allocated]
        except (Overflow, OverflowUnsplittable):
            skipped += 1  # reported and skipped, never emitted
            continue
        for asg in fitted:
            if not asg.segment:
                continue
            emitted += 1
            w, h = measurer.measure(asg.segment, asg.font, asg.font_size)
            box = by_id[asg.line_id].bbox
            if w > box.width * 0.98 + 1e-9 or h > box.height * 0.98 + 1e-9:
                fit_violations += 1
    _report(7, "bidi balance and box fit",
            unbalanced == 0 and fit_violations == 0 and emitted > 0,
            "unbalanced isolates=%d/10000; fit violations=%d over %d emitted "
            "assignments (%d paragraphs skipped as unsplittable)"
            % (unbalanced, fit_violations, emitted, skipped))


def test_criterion_08_determinism_and_resume(tmp_path):
    import hashlib
    import json
    import os

    from docforge.errors import PipelineIoError
    from test_pipeline import write_annotation_fixture, write_latex_fixture

    start = time.perf_counter()
    counts = ArtifactCounts(crops=700, pages=100, tables_consistent=400,
                            tables_random=200, tables_latex=100, charts=500)
    assert counts.total() == 2000

    def config_at(root):
        return CorpusConfig(
            master_seed=20240508, counts=counts, output_root=str(root),
            shard_size=250,
            annotations_dir=write_annotation_fixture(tmp_path, n_docs=3),
            latex_dir=write_latex_fixture(tmp_path),
            provider=ProviderConfig(kind="pseudo", target_lang="ar"))

    digests = []
    for name in ("run-a", "run-b"):
        manifest = run_pipeline(config_at(tmp_path / name))
        digests.append(hashlib.sha256(open(manifest, "rb").read()).hexdigest())

    resumed_cfg = config_at(tmp_path / "run-c")
    with pytest.raises(PipelineIoError):
        run_pipeline(resumed_cfg, stop_after_shards=3)
    manifest_c = run_pipeline(resumed_cfg)
    digest_c = hashlib.sha256(open(manifest_c, "rb").read()).hexdigest()

    with open(manifest_c, encoding="utf-8") as fh:
        records = [json.loads(line) for line in fh]
    body = [r for r in records if not r.get("summary")]
    produced = [r for r in body if not r.get("skipped")]
    files_exist = all(
        os.path.exists(os.path.join(resumed_cfg.output_root, rel))
        for r in produced for rel in list(r["image_paths"]) + [r["ground_truth_path"]])
    elapsed = time.perf_counter() - start

    _report(8, "determinism and resume",
            digests[0] == digests[1] == digest_c and len(body) == 2000
            and files_exist and elapsed < 300.0,
            "manifest digests equal=%s; records=%d/2000; files on disk=%s; "
            "%.1fs (limit 300s)"
            % (digests[0] == digests[1] == digest_c, len(body), files_exist, elapsed))


def test_criterion_09_statistical_knobs():
    marks_total = 10_000
    text = "بَ" * marks_total
    out = strip_diacritics(text, "medium", SeededRng(20240509, 1))
    removed_frac = (marks_total - sum(1 for ch in out if ch in DIACRITICS)) / marks_total

    runs = 10_000
    numbers = " ".join("73" for _ in range(runs))
    flipped = substitute_numerals(numbers, 0.6, SeededRng(20240509, 2))
    eastern_frac = flipped.count("٧٣") / runs

    rng = SeededRng(20240509, 3)
    counts = Counter(generate_chart_spec(None, rng).chart_type for _ in range(15_000))
    chart_dev = max(abs(counts[t] / 15_000 - 1 / 15) for t in CHART_TYPES)

    _report(9, "statistical knobs",
            abs(removed_frac - 0.50) <= 0.02 and abs(eastern_frac - 0.60) <= 0.02
            and chart_dev <= 0.01,
            "medium removal=%.4f (0.50±0.02); eastern=%.4f (0.60±0.02); "
            "max chart-type deviation=%.4f (≤0.01)"
            % (removed_frac, eastern_frac, chart_dev))


def test_criterion_10_translation_constraints():
    provider = PseudoTranslationProvider()
    rng = SeededRng(20240510, 0)
    protected_pool = ["U.S.", "Inc.", "$5", "12%", "№", "$1,250", "3°"]
    words = ["quarterly", "report", "figures", "shows", "growth", "market",
             "sector", "against", "estimate"]
    cardinality_bad = 0
    preservation_bad = 0
    written = 0
    for _ in range(1000):
        n_lines = rng.randint(1, 4)
        lines = []
        for _ in range(n_lines):
            tokens = [rng.choice(words) for _ in range(rng.randint(2, 7))]
            for _ in range(rng.randint(0, 2)):
                tokens.insert(rng.randrange(len(tokens) + 1), rng.choice(protected_pool))
            lines.append(" ".join(tokens))
        request = TranslationRequest(lines=tuple(lines),
                                     contiguous=tuple([True] * (n_lines - 1)),
                                     source_lang="en", target_lang="ar")
        try:
            response = translate_paragraph(provider, request)
        except Exception:
            cardinality_bad += 1
            continue
        if len(response.lines) != len(lines):
            cardinality_bad += 1
            continue
        violations = [v for src, out in zip(lines, response.lines)
                      for v in verify_preservation(src, out)]
        if violations:
            preservation_bad += 1
            continue  # would never be written to the corpus
        written += 1
    _report(10, "translation constraints",
            cardinality_bad == 0 and preservation_bad == 0 and written == 1000,
            "cardinality failures=%d, preservation failures=%d, written=%d/1000"
            % (cardinality_bad, preservation_bad, written))
