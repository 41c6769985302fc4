"""Locating and validating the rule, mode-map and lexicon files."""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

from .detection import DEFAULT_CYCLE_BUDGET, DEFAULT_MAX_LEN
from .exceptions import ConfigError

__all__ = ["CONFIG_ENV_VAR", "Config", "OUTPUT_FORMATS", "bundled_config_dir", "corpus_dir", "default_config_dir"]

CONFIG_ENV_VAR = "ONTOSCOPE_CONFIG_DIR"
OUTPUT_FORMATS = ("text", "structured", "dot")

RULES_FILE = "rules.tsv"
MODES_FILE = "modes.tsv"
LEXICON_FILE = "lexicon.txt"

_DATA = Path(__file__).resolve().parent / "data"


def bundled_config_dir() -> Path:
    return _DATA / "config"


def corpus_dir() -> Path:
    """Directory holding the bundled scenario transcripts."""
    return _DATA / "corpus"


def default_config_dir() -> Path:
    env = os.environ.get(CONFIG_ENV_VAR)
    return Path(env) if env else bundled_config_dir()


@dataclass(frozen=True)
class Config:
    rule_table_path: Path
    mode_map_path: Path
    lexicon_path: Path
    max_cycle_len: int = DEFAULT_MAX_LEN
    cycle_budget: int = DEFAULT_CYCLE_BUDGET
    output_format: str = "text"

    def __post_init__(self):
        for name in ("rule_table_path", "mode_map_path", "lexicon_path"):
            p = Path(getattr(self, name))
            object.__setattr__(self, name, p)
            if not p.is_file():
                raise ConfigError(f"{name.replace('_', ' ')} not found: {p}")
        if not isinstance(self.max_cycle_len, int) or self.max_cycle_len < 1:
            raise ConfigError(f"max cycle length must be >= 1, got {self.max_cycle_len!r}")
        if not isinstance(self.cycle_budget, int) or self.cycle_budget < 1:
            raise ConfigError(f"cycle budget must be >= 1, got {self.cycle_budget!r}")
        if self.output_format not in OUTPUT_FORMATS:
            raise ConfigError(f"output format must be one of {OUTPUT_FORMATS}, got {self.output_format!r}")

    @classmethod
    def load(
        cls,
        config_dir: str | Path | None = None,
        *,
        rules: str | Path | None = None,
        modes: str | Path | None = None,
        lexicon: str | Path | None = None,
        **kwargs,
    ) -> "Config":
        """Start from ``config_dir`` (or the default directory) and apply per-file overrides."""
        base = Path(config_dir) if config_dir is not None else default_config_dir()
        return cls(
            rules or base / RULES_FILE,
            modes or base / MODES_FILE,
            lexicon or base / LEXICON_FILE,
            **kwargs,
        )
