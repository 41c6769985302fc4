"""Transcript parsing and pre-categorical capture of term mentions.

A transcript is a plain UTF-8 file with one speaker turn per line::

    # comments start at column 0
    [S1] Who are 'we' in this context?
    [S2] 'We' is a system with @term{subjectivity}.

Capture only locates *where* a term is mentioned. It never decides what the
term is related to or how it is interpreted; that happens downstream.
"""

from __future__ import annotations

import enum
import re
import unicodedata
from dataclasses import dataclass
from typing import Iterable

from .exceptions import MalformedLine, UnterminatedAnnotation

__all__ = [
    "CaptureKind",
    "Phenomenon",
    "Transcript",
    "Utterance",
    "capture_phenomena",
    "core_bounds",
    "normalize_term",
    "parse_transcript",
]

QUOTE_CHARS = "'\"‘’“”"
ANNOTATION_OPEN = "@term{"

_UTTERANCE_RE = re.compile(r"\[([^\]]+)\] (.*)")
_WS_RE = re.compile(r"\s+")
# (open, close) pairs; the lookarounds keep apostrophes ("it's") from opening or closing a quote.
_QUOTE_RES = [
    re.compile(rf"(?<!\w){re.escape(o)}(?=\S)(.+?)(?<=\S){re.escape(c)}(?!\w)")
    for o, c in [("'", "'"), ('"', '"'), ("‘", "’"), ("“", "”")]
]


class CaptureKind(enum.Enum):
    QUOTED = "Quoted"
    LEXICON_KEY = "LexiconKey"
    ANNOTATED = "Annotated"

    @property
    def precedence(self) -> int:
        return _PRECEDENCE[self]


_PRECEDENCE = {CaptureKind.ANNOTATED: 3, CaptureKind.QUOTED: 2, CaptureKind.LEXICON_KEY: 1}


@dataclass(frozen=True)
class Utterance:
    index: int
    speaker: str
    text: str
    line_no: int | None = None

    def __post_init__(self):
        if not self.speaker.strip():
            raise ValueError("utterance speaker must be non-empty")
        if not self.text.strip():
            raise ValueError("utterance text must be non-empty")


@dataclass(frozen=True)
class Transcript:
    utterances: tuple[Utterance, ...]
    source_name: str = "<string>"

    def __post_init__(self):
        object.__setattr__(self, "utterances", tuple(self.utterances))
        for i, u in enumerate(self.utterances):
            if u.index != i:
                raise ValueError(f"utterance indices must be contiguous from 0, got {u.index} at {i}")

    def __len__(self) -> int:
        return len(self.utterances)

    def __iter__(self):
        return iter(self.utterances)


@dataclass(frozen=True)
class Phenomenon:
    """A captured term mention. Deliberately carries no relation and no mode."""

    surface: str
    utterance_index: int
    span: tuple[int, int]
    capture_kind: CaptureKind


def _is_strippable(ch: str) -> bool:
    return ch.isspace() or ch in QUOTE_CHARS or unicodedata.category(ch).startswith("P")


def core_bounds(text: str, start: int = 0, end: int | None = None) -> tuple[int, int]:
    """Shrink ``[start, end)`` past surrounding whitespace, quotes and punctuation."""
    if end is None:
        end = len(text)
    while start < end and _is_strippable(text[start]):
        start += 1
    while end > start and _is_strippable(text[end - 1]):
        end -= 1
    return start, end


def normalize_term(text: str) -> str:
    """Lowercase, trim, collapse whitespace and strip surrounding quotes/punctuation.

    Internal hyphens and dashes survive, so ``"Right–Left,"`` becomes ``"right–left"``.
    """
    s, e = core_bounds(text)
    return _WS_RE.sub(" ", text[s:e].lower())


def parse_transcript(raw: str, source_name: str = "<string>") -> Transcript:
    utterances = []
    for line_no, line in enumerate(raw.split("\n"), start=1):
        line = line.rstrip("\r")
        if line.startswith("#") or not line.strip():
            continue
        m = _UTTERANCE_RE.fullmatch(line)
        if m is None or not m.group(1).strip() or not m.group(2).strip():
            raise MalformedLine(f"expected '[speaker] text', got {line[:40]!r}", line_no)
        utterances.append(
            Utterance(index=len(utterances), speaker=m.group(1), text=m.group(2), line_no=line_no)
        )
    return Transcript(tuple(utterances), source_name)


def _make(text: str, start: int, end: int, idx: int, kind: CaptureKind) -> Phenomenon | None:
    s, e = core_bounds(text, start, end)
    if s == e:
        return None
    return Phenomenon(_WS_RE.sub(" ", text[s:e].lower()), idx, (s, e), kind)


def _lexicon_regex(keys: Iterable[str]) -> re.Pattern | None:
    keys = sorted({k for k in keys if k}, key=lambda k: (-len(k), k))
    if not keys:
        return None
    # Longest alternative first, so the leftmost match at each position is the longest key.
    alts = "|".join(r"\s+".join(re.escape(w) for w in k.split()) for k in keys)
    return re.compile(rf"(?<!\w)(?:{alts})(?!\w)", re.IGNORECASE)


def _annotations(u: Utterance) -> list[tuple[int, int]]:
    spans = []
    pos = u.text.find(ANNOTATION_OPEN)
    while pos != -1:
        inner = pos + len(ANNOTATION_OPEN)
        close = u.text.find("}", inner)
        if close == -1:
            raise UnterminatedAnnotation(u.index, u.line_no)
        spans.append((inner, close))
        pos = u.text.find(ANNOTATION_OPEN, close + 1)
    return spans


def capture_phenomena(
    t: Transcript, lexicon_keys: Iterable[str] = (), annotations_enabled: bool = True
) -> list[Phenomenon]:
    """Capture quoted spans, lexicon-key occurrences and ``@term{...}`` annotations.

    Results are in document order. When two captures share the same
    utterance and span only the highest-precedence kind is kept
    (Annotated > Quoted > LexiconKey).
    """
    key_re = _lexicon_regex(normalize_term(k) for k in lexicon_keys)
    found: dict[tuple[int, tuple[int, int]], Phenomenon] = {}

    def add(p: Phenomenon | None):
        if p is None:
            return
        key = (p.utterance_index, p.span)
        prev = found.get(key)
        if prev is None or p.capture_kind.precedence > prev.capture_kind.precedence:
            found[key] = p

    for u in t.utterances:
        text = u.text
        if annotations_enabled:
            for s, e in _annotations(u):
                add(_make(text, s, e, u.index, CaptureKind.ANNOTATED))
        for rx in _QUOTE_RES:
            for m in rx.finditer(text):
                add(_make(text, m.start(1), m.end(1), u.index, CaptureKind.QUOTED))
        if key_re is not None:
            for m in key_re.finditer(text):
                add(_make(text, m.start(), m.end(), u.index, CaptureKind.LEXICON_KEY))

    return sorted(found.values(), key=lambda p: (p.utterance_index, p.span[0], -p.span[1]))
