"""Input checks shared by the estimator and the CLI."""

from __future__ import annotations

import numbers
from pathlib import Path

from .categorical import RuleTable, load_rule_table
from .existential import ModeMap, load_mode_map
from .ingest import Transcript, parse_transcript
from .reduction import SubstitutionLexicon, load_lexicon

__all__ = [
    "check_lexicon",
    "check_mode_map",
    "check_positive_int",
    "check_rule_table",
    "check_transcript",
    "check_transcripts",
]


def check_positive_int(value, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral) or value < 1:
        raise ValueError(f"{name} must be a positive integer, got {value!r}")
    return int(value)


def check_transcript(x, source_name: str = "<string>") -> Transcript:
    """Accept a parsed :class:`Transcript`, raw transcript text, or a path."""
    if isinstance(x, Transcript):
        return x
    if isinstance(x, Path):
        return parse_transcript(x.read_text(encoding="utf-8"), x.name)
    if isinstance(x, str):
        return parse_transcript(x, source_name)
    raise TypeError(f"expected Transcript, str or Path, got {type(x).__name__}")


def check_transcripts(X) -> list[Transcript]:
    if isinstance(X, (str, Path, Transcript)):
        raise TypeError("expected a sequence of transcripts; wrap a single transcript in a list")
    try:
        items = list(X)
    except TypeError:
        raise TypeError(f"expected a sequence of transcripts, got {type(X).__name__}") from None
    return [check_transcript(x, f"<transcript {i}>") for i, x in enumerate(items)]


def _load(value, kind, loader):
    if isinstance(value, kind):
        return value
    if isinstance(value, (str, Path)):
        return loader(value)
    raise TypeError(f"expected {kind.__name__} or a path, got {type(value).__name__}")


def check_rule_table(value) -> RuleTable:
    return _load(value, RuleTable, load_rule_table)


def check_mode_map(value) -> ModeMap:
    return _load(value, ModeMap, load_mode_map)


def check_lexicon(value) -> SubstitutionLexicon:
    return _load(value, SubstitutionLexicon, load_lexicon)
