"""Choose a break point for each cycle and propose categorical substitutes.

The cycle is read through the existential layer to pick a *pivot*: the node
carrying the most existential load. The edge leaving the pivot is the
suggested break point, and the substitution lexicon supplies alternative
categories for the term at the other end of that edge. The pivot's mode is
kept on the suggestion for auditing but never rendered.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping

from .categorical import ConceptGraph, NodeFlag, RelationEdge
from .detection import Cycle, RecursionClass, RecursionKind, classify
from .exceptions import MalformedLexiconEntry
from .existential import ExistentialMode, ModeAssignment, is_mode_name
from .ingest import normalize_term

__all__ = [
    "EXISTENTIAL_LOAD",
    "RecursionFinding",
    "ReductionSuggestion",
    "SubstitutionLexicon",
    "load_lexicon",
    "parse_lexicon",
    "reduce",
    "reduce_all",
]

# Highest load first.
_LOAD_ORDER = [
    ExistentialMode.DASEIN,
    ExistentialMode.CARE,
    ExistentialMode.DISCLOSURE,
    ExistentialMode.OPENNESS,
    ExistentialMode.BEING_IN_THE_WORLD,
    ExistentialMode.UNDERSTANDING,
    ExistentialMode.TEMPORALITY,
    ExistentialMode.NON_SPATIO_TEMPORAL,
    ExistentialMode.UNDETERMINED,
]
EXISTENTIAL_LOAD: Mapping[ExistentialMode, int] = MappingProxyType(
    {m: len(_LOAD_ORDER) - i for i, m in enumerate(_LOAD_ORDER)}
)


class SubstitutionLexicon:
    """Map from a term to its ordered substitute category phrases.

    Loading does not reject phrases that spell an existential mode; such
    phrases are reported by :meth:`mode_name_substitutes` (and therefore by
    the layer check) and are filtered out of every suggestion.
    """

    def __init__(self, entries: Mapping[str, Iterable[str]] | None = None):
        merged: dict[str, list[str]] = {}
        for term, phrases in (entries or {}).items():
            key = normalize_term(term)
            if not key:
                raise ValueError("lexicon term must be non-empty")
            bucket = merged.setdefault(key, [])
            for phrase in phrases:
                p = normalize_term(phrase)
                if not p:
                    raise ValueError(f"empty substitute for {term!r}")
                if p not in bucket:
                    bucket.append(p)
        self._entries = {k: tuple(v) for k, v in merged.items()}

    @property
    def entries(self) -> Mapping[str, tuple[str, ...]]:
        return MappingProxyType(self._entries)

    def get(self, term: str) -> tuple[str, ...]:
        return self._entries.get(normalize_term(term), ())

    def keys(self):
        return self._entries.keys()

    def mode_name_substitutes(self) -> list[tuple[str, str]]:
        return [(t, p) for t, ps in self._entries.items() for p in ps if is_mode_name(p)]

    def __len__(self):
        return len(self._entries)

    def __eq__(self, other):
        return isinstance(other, SubstitutionLexicon) and self._entries == other._entries

    def __repr__(self):
        return f"SubstitutionLexicon({dict(self._entries)!r})"


def parse_lexicon(text: str) -> SubstitutionLexicon:
    entries: dict[str, list[str]] = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        term, sep, rest = line.partition("=>")
        alts = [normalize_term(a) for a in rest.split("|")]
        if not sep or not normalize_term(term) or not all(alts):
            raise MalformedLexiconEntry("expected 'term => alt1 | alt2 | ...'", line_no)
        entries.setdefault(normalize_term(term), []).extend(alts)
    return SubstitutionLexicon(entries)


def load_lexicon(path: str | Path) -> SubstitutionLexicon:
    return parse_lexicon(Path(path).read_text(encoding="utf-8"))


@dataclass(frozen=True)
class ReductionSuggestion:
    break_edge: RelationEdge
    pivot: int
    substitutes: tuple[str, ...]
    rationale_mode: ExistentialMode  # internal only; never rendered


@dataclass(frozen=True)
class RecursionFinding:
    cycle: Cycle
    recursion_class: RecursionClass
    suggestion: ReductionSuggestion
    rendered: str | None = None


def reduce(
    c: Cycle,
    cls: RecursionClass,
    g: ConceptGraph,
    modes: ModeAssignment,
    lex: SubstitutionLexicon,
) -> ReductionSuggestion:
    candidates = list(c.node_sequence)
    if cls.kind is RecursionKind.METAPHOR_LOOP:
        flagged = [v for v in candidates if NodeFlag.METAPHOR_TERM in g.nodes[v].flags]
        candidates = flagged or candidates
    pivot = min(candidates, key=lambda v: (-EXISTENTIAL_LOAD[modes[v]], v))
    break_edge = c.edge_sequence[c.node_sequence.index(pivot)]
    substitutes = tuple(s for s in lex.get(g.label(break_edge.target)) if not is_mode_name(s))
    return ReductionSuggestion(break_edge, pivot, substitutes, modes[pivot])


def reduce_all(
    cycles: Iterable[Cycle], g: ConceptGraph, modes: ModeAssignment, lex: SubstitutionLexicon
) -> list[RecursionFinding]:
    findings = []
    for c in cycles:
        cls = classify(c, g)
        findings.append(RecursionFinding(c, cls, reduce(c, cls, g, modes, lex)))
    return findings
