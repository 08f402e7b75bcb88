"""Run configuration: defaults, flat key=value config files, CLI overrides.

Precedence is CLI flag > config file > built-in default, resolved field by
field. Config files hold one ``key = value`` pair per line with ``#``
comments; list-valued keys use commas.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path

from .errors import ConfigError
from .ingest import DEFAULT_TAGS, Genre, genre_from_label
from .tokenizer import AbbreviationSet, DelimiterMode, default_abbreviations


@dataclass
class RunConfig:
    root: Path | None = None
    out_dir: Path = Path("diachron_out")
    delimiters: str = "standard"
    min_words: int = 2
    genres: tuple[str, ...] | None = None
    decades: tuple[int, ...] | None = None
    jobs: int = 1
    output_format: str = "csv"
    denominator: str = "kept"
    prefix_map: dict[str, str] | None = None
    reclass: Path | None = None
    tags: tuple[str, ...] = DEFAULT_TAGS
    abbrev_file: Path | None = None

    def validate(self) -> "RunConfig":
        DelimiterMode.from_name(self.delimiters)
        if self.min_words < 1:
            raise ConfigError(f"min_words must be >= 1, got {self.min_words}")
        if self.jobs < 1:
            raise ConfigError(f"jobs must be >= 1, got {self.jobs}")
        if self.output_format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.output_format!r}")
        if self.denominator not in ("kept", "raw"):
            raise ConfigError(f"denominator must be kept or raw, got {self.denominator!r}")
        if self.decades is not None:
            for d in self.decades:
                if d % 10 != 0:
                    raise ConfigError(f"decade filter values must be multiples of 10: {d}")
        return self

    def resolved_prefix_map(self) -> dict[str, Genre] | None:
        if self.prefix_map is None:
            return None
        return {prefix: genre_from_label(label) for prefix, label in self.prefix_map.items()}

    def resolved_abbreviations(self) -> AbbreviationSet:
        if self.abbrev_file is None:
            return default_abbreviations()
        return AbbreviationSet.from_file(self.abbrev_file)


# config-file key -> RunConfig field, with the parse applied to the raw string
_FIELD_FOR_KEY = {
    "root": "root",
    "out": "out_dir",
    "delimiters": "delimiters",
    "min_words": "min_words",
    "genres": "genres",
    "decades": "decades",
    "jobs": "jobs",
    "format": "output_format",
    "denominator": "denominator",
    "prefix_map": "prefix_map",
    "reclass": "reclass",
    "tags": "tags",
    "abbrev_file": "abbrev_file",
}


def parse_csv_strings(value: str) -> tuple[str, ...]:
    items = tuple(part.strip() for part in value.split(",") if part.strip())
    if not items:
        raise ConfigError(f"empty list value: {value!r}")
    return items


def parse_csv_ints(value: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in parse_csv_strings(value))
    except ValueError as exc:
        raise ConfigError(f"expected comma-separated integers: {value!r}") from exc


def parse_prefix_map(value: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for part in parse_csv_strings(value):
        if "=" not in part:
            raise ConfigError(f"prefix_map entries look like prefix=genre: {part!r}")
        prefix, label = part.split("=", 1)
        if not prefix.strip() or not label.strip():
            raise ConfigError(f"prefix_map entries look like prefix=genre: {part!r}")
        out[prefix.strip()] = label.strip()
    return out


_PARSERS = {
    "root": Path,
    "out_dir": Path,
    "delimiters": str,
    "min_words": int,
    "genres": parse_csv_strings,
    "decades": parse_csv_ints,
    "jobs": int,
    "output_format": str,
    "denominator": str,
    "prefix_map": parse_prefix_map,
    "reclass": Path,
    "tags": parse_csv_strings,
    "abbrev_file": Path,
}


def read_config_file(path: Path) -> dict[str, str]:
    """Parse a flat key=value file into raw string values."""
    raw: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.split("#", 1)[0].strip()
            if not stripped:
                continue
            if "=" not in stripped:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            key, value = (s.strip() for s in stripped.split("=", 1))
            if key not in _FIELD_FOR_KEY:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            raw[key] = value
    return raw


def build_config(cli_values: dict[str, object], config_path: Path | None = None) -> RunConfig:
    """Combine defaults, an optional config file, and CLI overrides.

    ``cli_values`` maps RunConfig field names to already-parsed values;
    None means the flag was not given.
    """
    cfg = RunConfig()
    if config_path is not None:
        for key, raw_value in read_config_file(config_path).items():
            field_name = _FIELD_FOR_KEY[key]
            try:
                setattr(cfg, field_name, _PARSERS[field_name](raw_value))
            except ConfigError:
                raise
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"bad value for {key!r}: {raw_value!r} ({exc})") from exc
    valid_fields = {f.name for f in fields(RunConfig)}
    for name, value in cli_values.items():
        if name not in valid_fields:
            raise ConfigError(f"unknown config field {name!r}")
        if value is not None:
            setattr(cfg, name, value)
    return cfg.validate()
