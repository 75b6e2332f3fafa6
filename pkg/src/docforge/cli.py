"""docforge command line: corpus generation, ingestion checks, paragraph
grouping dumps, evaluation, and HTML normalization."""

from __future__ import annotations

import argparse
import json
import os
import sys

from .errors import DocforgeError


def _cmd_gen(args) -> int:
    from .pipeline import load_config, run_pipeline, with_overrides

    config = load_config(args.config)
    config = with_overrides(config, seed=args.seed, only=args.only,
                            workers=args.workers)
    manifest = run_pipeline(config)
    records = sum(1 for _ in open(manifest, encoding="utf-8")) - 1
    print("wrote %s (%d records)" % (manifest, records))
    return 0


def _cmd_ingest(args) -> int:
    import glob

    from .ingest import parse_ocr_annotations, validate_page

    paths = []
    for path in args.paths:
        if os.path.isdir(path):
            paths.extend(sorted(glob.glob(os.path.join(path, "*.json"))))
        else:
            paths.append(path)
    if not paths:
        print("no annotation files found", file=sys.stderr)
        return 1
    failures = 0
    for path in paths:
        try:
            with open(path, "rb") as fh:
                issues = []
                doc = parse_ocr_annotations(fh.read(), issues=issues)
            n_lines = sum(len(p.lines) for p in doc.pages)
            print("%s: ok (%d pages, %d lines)" % (path, len(doc.pages), n_lines))
            for page in doc.pages:
                for issue in validate_page(page):
                    print("  page %d: [%s] %s" % (page.page_index, issue.rule,
                                                  issue.message))
            for issue in issues:
                print("  [%s] %s" % (issue.rule, issue.message))
        except DocforgeError as exc:
            failures += 1
            print("%s: FAILED (%s: %s)" % (path, type(exc).__name__, exc))
    return 1 if failures else 0


def _cmd_group(args) -> int:
    from .ingest import parse_ocr_annotations
    from .layout import LayoutParams, dump_layout_debug, group_paragraphs

    with open(args.annotations, "rb") as fh:
        doc = parse_ocr_annotations(fh.read())
    params = LayoutParams(overlap_threshold=args.overlap_threshold,
                          spacing_multiplier=args.spacing_multiplier)
    for page in doc.pages:
        if not page.lines:
            continue
        if args.dump_edges:
            sys.stdout.write(dump_layout_debug(page, params))
        else:
            paras = group_paragraphs(page, params)
            print("page %d: %d paragraphs" % (page.page_index, len(paras)))
            for para in paras:
                print("  %d: %s" % (para.paragraph_id, " ".join(para.line_ids)))
    return 0


def _pair_files(ref_dir: str, hyp_dir: str) -> list[tuple[str, str, str]]:
    names = sorted(os.listdir(ref_dir))
    pairs = []
    for name in names:
        ref = os.path.join(ref_dir, name)
        hyp = os.path.join(hyp_dir, name)
        if os.path.isfile(ref) and os.path.isfile(hyp):
            pairs.append((name, ref, hyp))
    return pairs


def _cmd_evaluate(args) -> int:
    from .metrics import char_error_rate, teds_html, word_error_rate

    pairs = _pair_files(args.ref, args.hyp)
    if not pairs:
        print("no matching reference/hypothesis file pairs", file=sys.stderr)
        return 1
    results = []
    for name, ref_path, hyp_path in pairs:
        ref = open(ref_path, encoding="utf-8").read()
        hyp = open(hyp_path, encoding="utf-8").read()
        if args.task == "ocr":
            results.append({"file": name, "wer": word_error_rate(ref, hyp),
                            "cer": char_error_rate(ref, hyp)})
        else:
            results.append({"file": name, "teds": teds_html(ref, hyp)})

    if args.task == "ocr":
        mean_wer = sum(r["wer"] for r in results) / len(results)
        mean_cer = sum(r["cer"] for r in results) / len(results)
        for r in results:
            print("%s\twer=%.4f\tcer=%.4f" % (r["file"], r["wer"], r["cer"]))
        print("mean\twer=%.4f\tcer=%.4f" % (mean_wer, mean_cer))
    else:
        mean_teds = sum(r["teds"] for r in results) / len(results)
        for r in results:
            print("%s\tteds=%.4f" % (r["file"], r["teds"]))
        print("mean\tteds=%.4f" % mean_teds)

    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            for r in results:
                fh.write(json.dumps(r, ensure_ascii=False, sort_keys=True) + "\n")
    return 0


def _cmd_normalize_html(args) -> int:
    from .tables import normalize_table_html

    with open(args.input, encoding="utf-8") as fh:
        html = fh.read()
    normalized = normalize_table_html(html)
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(normalized)
    print("wrote %s" % args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="docforge",
                                     description="Synthetic document corpus toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a corpus from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--only", choices=["crops", "pages", "tables", "charts"])
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("ingest", help="validate annotation files")
    p.add_argument("paths", nargs="+")
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("group", help="show paragraph grouping for a document")
    p.add_argument("annotations")
    p.add_argument("--dump-edges", action="store_true")
    p.add_argument("--overlap-threshold", type=float, default=0.30)
    p.add_argument("--spacing-multiplier", type=float, default=1.0)
    p.set_defaults(func=_cmd_group)

    p = sub.add_parser("evaluate", help="score hypothesis files against references")
    p.add_argument("--task", choices=["ocr", "table"], required=True)
    p.add_argument("--ref", required=True)
    p.add_argument("--hyp", required=True)
    p.add_argument("--json", help="also write JSON lines to this path")
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("normalize-html", help="canonicalize table HTML")
    p.add_argument("input")
    p.add_argument("output")
    p.set_defaults(func=_cmd_normalize_html)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DocforgeError as exc:
        print("error: %s: %s" % (type(exc).__name__, exc), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
