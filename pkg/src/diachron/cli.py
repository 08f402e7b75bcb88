"""Command line front end: stats, freq, compare-delimiters, gen."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .config import RunConfig, build_config, parse_csv_ints, parse_csv_strings, parse_prefix_map
from .errors import DiachronError, EmptyCorpus
from .frequency import TokenPattern, build_series
from .generator import GeneratorSpec, generate_corpus
from .ingest import load_reclassification, scan_corpus
from .pipeline import PipelineConfig, run_pipeline
from .report import (
    compare_table,
    counts_table,
    freq_table,
    pattern_slug,
    run_report_payload,
    summary_table,
    write_run_report,
    write_table,
)


def _add_corpus_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--root", type=Path, help="corpus root directory")
    p.add_argument("--config", type=Path, help="key=value config file")
    p.add_argument("--delimiters", choices=("standard", "extended"),
                   help="sentence delimiter inventory (default standard)")
    p.add_argument("--min-words", type=int, dest="min_words",
                   help="minimum words per kept sentence (default 2)")
    p.add_argument("--genres", type=parse_csv_strings, help="comma-separated genre filter")
    p.add_argument("--decades", type=parse_csv_ints, help="comma-separated decade filter")
    p.add_argument("--jobs", type=int, help="worker processes (default 1)")
    p.add_argument("--format", choices=("csv", "json"), dest="output_format",
                   help="output table format (default csv)")
    p.add_argument("--out", type=Path, dest="out_dir", help="output directory")
    p.add_argument("--prefix-map", type=parse_prefix_map, dest="prefix_map",
                   help="filename prefix mapping, e.g. mag=magazine,fic=fiction")
    p.add_argument("--reclass", type=Path, help="source_id,genre reclassification CSV")
    p.add_argument("--tags", type=parse_csv_strings, help="literal tags stripped before tokenizing")
    p.add_argument("--abbrev-file", type=Path, dest="abbrev_file",
                   help="abbreviation list replacing the bundled one")


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    cli_values = {
        "root": args.root,
        "out_dir": args.out_dir,
        "delimiters": args.delimiters,
        "min_words": args.min_words,
        "genres": args.genres,
        "decades": args.decades,
        "jobs": args.jobs,
        "output_format": args.output_format,
        "prefix_map": args.prefix_map,
        "reclass": args.reclass,
        "tags": args.tags,
        "abbrev_file": args.abbrev_file,
        "denominator": getattr(args, "denominator", None),
    }
    return build_config(cli_values, args.config)


def _scan(cfg: RunConfig):
    if cfg.root is None:
        raise EmptyCorpus("no corpus root given (--root or config root=)")
    reclass = load_reclassification(cfg.reclass) if cfg.reclass is not None else None
    refs, scan_report = scan_corpus(cfg.root, cfg.resolved_prefix_map(), reclass)
    if cfg.genres is not None:
        wanted = set(cfg.genres)
        refs = [r for r in refs if r.genre.label in wanted]
    if cfg.decades is not None:
        wanted_decades = set(cfg.decades)
        refs = [r for r in refs if r.decade in wanted_decades]
    if not refs:
        raise EmptyCorpus(f"no usable documents under {cfg.root}")
    return refs, scan_report


def _pipeline_config(cfg: RunConfig, modes: tuple[str, ...],
                     patterns: tuple[TokenPattern, ...] = ()) -> PipelineConfig:
    return PipelineConfig(
        tags=tuple(cfg.tags),
        abbrev_tokens=cfg.resolved_abbreviations().tokens,
        modes=modes,
        min_words=cfg.min_words,
        patterns=patterns,
    )


def _report_params(cfg: RunConfig, scan_report) -> dict:
    return {
        "root": str(cfg.root),
        "delimiters": cfg.delimiters,
        "min_words": cfg.min_words,
        "jobs": cfg.jobs,
        "files_seen": scan_report.files_seen,
        "files_malformed": len(scan_report.malformed),
        "folder_mismatches": len(scan_report.folder_mismatches),
    }


def cmd_stats(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args)
    refs, scan_report = _scan(cfg)
    pcfg = _pipeline_config(cfg, modes=(cfg.delimiters,))
    result = run_pipeline(refs, pcfg, cfg.jobs)
    cells = result.cells[cfg.delimiters]
    written = [
        write_table(counts_table(cells), cfg.output_format, cfg.out_dir),
        write_table(summary_table(cells), cfg.output_format, cfg.out_dir),
        write_run_report(run_report_payload(result, _report_params(cfg, scan_report)), cfg.out_dir),
    ]
    totals = result.report.modes[cfg.delimiters]
    print(f"{result.report.files_processed} files, "
          f"{totals.sentences_kept} sentences kept "
          f"({totals.removed_redacted} redacted, {totals.removed_short} short removed)")
    for path in written:
        print(f"wrote {path}")
    return 0


def _collect_patterns(args: argparse.Namespace) -> tuple[TokenPattern, ...]:
    case_sensitive = bool(getattr(args, "case_sensitive", False))
    texts: list[str] = list(args.pattern or [])
    if args.patterns_file is not None:
        with open(args.patterns_file, encoding="utf-8") as fh:
            for line in fh:
                entry = line.split("#", 1)[0].strip()
                if entry:
                    texts.append(entry)
    if not texts:
        raise DiachronError("freq needs --pattern or --patterns-file")
    return tuple(TokenPattern.parse(t, case_sensitive=case_sensitive) for t in texts)


def cmd_freq(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args)
    patterns = _collect_patterns(args)
    refs, scan_report = _scan(cfg)
    pcfg = _pipeline_config(cfg, modes=(cfg.delimiters,), patterns=patterns)
    result = run_pipeline(refs, pcfg, cfg.jobs)
    cells = result.cells[cfg.delimiters]
    written = []
    for i, pattern in enumerate(patterns):
        cell_counts = {}
        for key, cell in cells.items():
            words = cell.kept_words if cfg.denominator == "kept" else cell.raw_words
            cell_counts[(key.decade, key.genre.label)] = (cell.matches[i], words)
        series = build_series(pattern, cell_counts, group_by_genre=True)
        table = freq_table(series, pattern_slug(pattern.display, i))
        written.append(write_table(table, cfg.output_format, cfg.out_dir))
    params = _report_params(cfg, scan_report)
    params["patterns"] = [p.display for p in patterns]
    params["denominator"] = cfg.denominator
    written.append(write_run_report(run_report_payload(result, params), cfg.out_dir))
    for path in written:
        print(f"wrote {path}")
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args)
    refs, scan_report = _scan(cfg)
    pcfg = _pipeline_config(cfg, modes=("standard", "extended"))
    result = run_pipeline(refs, pcfg, cfg.jobs)
    table = compare_table(result.cells["standard"], result.cells["extended"])
    written = [
        write_table(table, cfg.output_format, cfg.out_dir),
        write_run_report(run_report_payload(result, _report_params(cfg, scan_report)), cfg.out_dir),
    ]
    for path in written:
        print(f"wrote {path}")
    return 0


def cmd_gen(args: argparse.Namespace) -> int:
    spec = GeneratorSpec(
        seed=args.seed,
        decades=tuple(args.decades),
        genres=tuple(args.genres),
        docs_per_cell=args.docs_per_cell,
        sentences_per_cell=args.sentences_per_cell,
        mean_start=args.mean_start,
        mean_end=args.mean_end,
        vocab_size=args.vocab_size,
        style=args.style,
        semicolon_rate=args.semicolon_rate,
        redaction_rate=args.redaction_rate,
        short_rate=args.short_rate,
        tag_rate=args.tag_rate,
        inject_pattern=args.inject_pattern,
        inject_per_cell=args.inject_per_cell,
    )
    manifest = generate_corpus(spec, args.out_dir)
    totals = manifest["totals"]
    print(f"generated {totals['files']} files, {totals['sentences']} sentences, "
          f"{totals['words_all']} words under {args.out_dir}")
    print(f"wrote {Path(args.out_dir) / 'manifest.json'}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diachron",
        description="Sentence-length and construction-frequency statistics "
                    "over decade/genre corpus trees",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_stats = sub.add_parser("stats", help="per-(decade, genre) sentence length tables")
    _add_corpus_flags(p_stats)
    p_stats.set_defaults(func=cmd_stats)

    p_freq = sub.add_parser("freq", help="normalized token-pattern frequencies")
    _add_corpus_flags(p_freq)
    p_freq.add_argument("--pattern", action="append", help="token pattern (repeatable)")
    p_freq.add_argument("--patterns-file", type=Path, dest="patterns_file",
                        help="file with one pattern per line")
    p_freq.add_argument("--denominator", choices=("kept", "raw"),
                        help="word total used for per-million rates (default kept)")
    p_freq.add_argument("--case-sensitive", action="store_true", dest="case_sensitive",
                        help="match patterns case-sensitively")
    p_freq.set_defaults(func=cmd_freq)

    p_cmp = sub.add_parser("compare-delimiters",
                           help="standard vs extended delimiter statistics side by side")
    _add_corpus_flags(p_cmp)
    p_cmp.set_defaults(func=cmd_compare)

    p_gen = sub.add_parser("gen", help="generate a synthetic corpus with a ground-truth manifest")
    p_gen.add_argument("--out", type=Path, dest="out_dir", required=True)
    p_gen.add_argument("--seed", type=int, required=True)
    p_gen.add_argument("--decades", type=parse_csv_ints, default=(1810, 1860, 1910, 1960, 2000))
    p_gen.add_argument("--genres", type=parse_csv_strings,
                       default=("fiction", "magazine", "newspaper", "non_fiction"))
    p_gen.add_argument("--docs-per-cell", type=int, dest="docs_per_cell", default=4)
    p_gen.add_argument("--sentences-per-cell", type=int, dest="sentences_per_cell", default=500)
    p_gen.add_argument("--mean-start", type=float, dest="mean_start", default=27.0)
    p_gen.add_argument("--mean-end", type=float, dest="mean_end", default=12.0)
    p_gen.add_argument("--vocab-size", type=int, dest="vocab_size", default=2000)
    p_gen.add_argument("--style", choices=("mixed", "attached", "detached"), default="mixed")
    p_gen.add_argument("--semicolon-rate", type=float, dest="semicolon_rate", default=0.0)
    p_gen.add_argument("--redaction-rate", type=float, dest="redaction_rate", default=0.0)
    p_gen.add_argument("--short-rate", type=float, dest="short_rate", default=0.0)
    p_gen.add_argument("--tag-rate", type=float, dest="tag_rate", default=0.0)
    p_gen.add_argument("--inject-pattern", dest="inject_pattern")
    p_gen.add_argument("--inject-per-cell", type=int, dest="inject_per_cell", default=0)
    p_gen.set_defaults(func=cmd_gen)

    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DiachronError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
