"""Deterministic output tables.

CSV cells render reals with exactly four decimal places and rows arrive
pre-sorted by (decade, genre), so a given corpus produces byte-identical
files regardless of worker count or scan order. JSON keeps full float
precision with stable key order.
"""

from __future__ import annotations

import csv
import json
import re
from dataclasses import dataclass
from pathlib import Path

from .analytics import GroupKey, summarize
from .errors import EmptyHistogram
from .frequency import FrequencySeries
from .pipeline import CellStats, PipelineResult, RunReport


@dataclass
class Table:
    name: str
    columns: tuple[str, ...]
    rows: list[tuple]


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.4f}"
    return str(v)


def write_table_csv(table: Table, path: Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow([_csv_cell(v) for v in row])


def write_table_json(table: Table, path: Path) -> None:
    payload = {
        "table": table.name,
        "rows": [dict(zip(table.columns, row)) for row in table.rows],
    }
    with open(path, "w", encoding="utf-8", newline="") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def write_table(table: Table, fmt: str, out_dir: Path) -> Path:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if fmt == "csv":
        path = out_dir / f"{table.name}.csv"
        write_table_csv(table, path)
    elif fmt == "json":
        path = out_dir / f"{table.name}.json"
        write_table_json(table, path)
    else:
        raise ValueError(f"format must be csv or json, got {fmt!r}")
    return path


def _sorted_cells(cells: dict[GroupKey, CellStats]):
    return sorted(cells.items(), key=lambda kv: (kv[0].decade, kv[0].genre.label))


def counts_table(cells: dict[GroupKey, CellStats]) -> Table:
    rows = [(k.decade, k.genre.label, c.hist.n) for k, c in _sorted_cells(cells)]
    return Table(name="sentence_counts", columns=("decade", "genre", "n"), rows=rows)


SUMMARY_COLUMNS = (
    "decade", "genre", "n", "mean", "median", "q1", "q3",
    "whisker_low", "whisker_high", "min", "max",
)


def summary_table(cells: dict[GroupKey, CellStats]) -> Table:
    rows = []
    for k, c in _sorted_cells(cells):
        try:
            s = summarize(c.hist)
        except EmptyHistogram:
            rows.append((k.decade, k.genre.label, 0) + (None,) * 8)
            continue
        rows.append((k.decade, k.genre.label, s.n, s.mean, s.median, s.q1, s.q3,
                     s.whisker_low, s.whisker_high, s.min, s.max))
    return Table(name="length_summary", columns=SUMMARY_COLUMNS, rows=rows)


def freq_table(series: FrequencySeries, name: str) -> Table:
    rows = [(series.pattern, r.decade, r.genre, r.match_count, r.word_total, r.per_million)
            for r in series.rows]
    return Table(
        name=name,
        columns=("pattern", "decade", "genre", "match_count", "word_total", "per_million"),
        rows=rows,
    )


COMPARE_COLUMNS = (
    "decade", "genre",
    "n_standard", "mean_standard", "median_standard",
    "n_extended", "mean_extended", "median_extended",
    "delta_n", "delta_mean",
)


def compare_table(
    std_cells: dict[GroupKey, CellStats],
    ext_cells: dict[GroupKey, CellStats],
) -> Table:
    keys = sorted(set(std_cells) | set(ext_cells), key=lambda k: (k.decade, k.genre.label))
    rows = []
    for k in keys:
        sides = []
        for cells in (std_cells, ext_cells):
            cell = cells.get(k)
            if cell is None or cell.hist.n == 0:
                sides.append((0, None, None))
            else:
                s = summarize(cell.hist)
                sides.append((s.n, s.mean, s.median))
        (n_s, mean_s, med_s), (n_e, mean_e, med_e) = sides
        delta_n = n_e - n_s
        delta_mean = (mean_e - mean_s) if (mean_e is not None and mean_s is not None) else None
        rows.append((k.decade, k.genre.label, n_s, mean_s, med_s, n_e, mean_e, med_e,
                     delta_n, delta_mean))
    return Table(name="compare_delimiters", columns=COMPARE_COLUMNS, rows=rows)


def pattern_slug(display: str, index: int) -> str:
    slug = re.sub(r"[^a-z0-9]+", "_", display.casefold()).strip("_")
    return f"freq_{slug}" if slug else f"freq_pattern_{index}"


def run_report_payload(result: PipelineResult, params: dict) -> dict:
    rep: RunReport = result.report
    return {
        "files_processed": rep.files_processed,
        "files_skipped": rep.files_skipped,
        "decode_errors": rep.decode_errors,
        "modes": {
            m: {
                "sentences_emitted": t.sentences_emitted,
                "sentences_kept": t.sentences_kept,
                "removed_redacted": t.removed_redacted,
                "removed_short": t.removed_short,
            }
            for m, t in sorted(rep.modes.items())
        },
        "params": params,
    }


def write_run_report(payload: dict, out_dir: Path) -> Path:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "run_report.json"
    with open(path, "w", encoding="utf-8", newline="") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    return path
