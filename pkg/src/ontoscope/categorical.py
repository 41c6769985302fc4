"""The categorical layer: a typed concept graph of definitional relations.

Assertions are pulled out of utterances by a small table of surface
patterns. A pattern such as ``<A> depends on <B>`` only fires when both
placeholders line up exactly with captured phenomena, so extraction never
invents terms of its own.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .exceptions import MalformedRule, MalformedTriple, UnknownPredicate
from .ingest import ANNOTATION_OPEN, QUOTE_CHARS, Phenomenon, Transcript, normalize_term

__all__ = [
    "IMPORTED_TRIPLE",
    "PREDICATE_MAP",
    "Assertion",
    "ConceptGraph",
    "ConceptNode",
    "NodeFlag",
    "Relation",
    "RelationEdge",
    "Rule",
    "RuleTable",
    "build_graph",
    "extract_assertions",
    "import_triples",
    "load_rule_table",
    "parse_rule_table",
]

IMPORTED_TRIPLE = "ImportedTriple"


class Relation(enum.Enum):
    DEFINED_THROUGH = "DefinedThrough"
    DEPENDS_ON = "DependsOn"
    LINKED_TO = "LinkedTo"
    METAPHOR_OF = "MetaphorOf"

    @classmethod
    def parse(cls, name: str) -> "Relation":
        return cls(name.strip())


class NodeFlag(enum.Enum):
    METAPHOR_TERM = "MetaphorTerm"


PREDICATE_MAP = {
    "defined_through": Relation.DEFINED_THROUGH,
    "depends_on": Relation.DEPENDS_ON,
    "linked_to": Relation.LINKED_TO,
    "metaphor_of": Relation.METAPHOR_OF,
}


@dataclass(frozen=True)
class ConceptNode:
    id: int
    label: str
    flags: frozenset = frozenset()


@dataclass(frozen=True)
class RelationEdge:
    source: int
    target: int
    relation: Relation
    provenance: int | str

    @property
    def key(self) -> tuple[int, int, Relation]:
        return (self.source, self.target, self.relation)


@dataclass(frozen=True)
class Assertion:
    subject: str
    relation: Relation
    object: str
    fragment: str
    intended: str | None = None
    utterance_index: int | str = IMPORTED_TRIPLE

    def __post_init__(self):
        if not self.fragment:
            raise ValueError("assertion fragment must be non-empty")


@dataclass(frozen=True)
class ConceptGraph:
    nodes: tuple[ConceptNode, ...] = ()
    edges: tuple[RelationEdge, ...] = ()
    _by_label: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", tuple(self.edges))
        by_label = {}
        for i, n in enumerate(self.nodes):
            if n.id != i:
                raise ValueError(f"node ids must be dense, got {n.id} at position {i}")
            if n.label in by_label:
                raise ValueError(f"duplicate node label {n.label!r}")
            by_label[n.label] = n.id
        seen = set()
        for e in self.edges:
            if not (0 <= e.source < len(self.nodes) and 0 <= e.target < len(self.nodes)):
                raise ValueError(f"edge {e.key} references a missing node")
            if e.key in seen:
                raise ValueError(f"duplicate edge {e.key}")
            seen.add(e.key)
        object.__setattr__(self, "_by_label", by_label)

    def node_id(self, label: str) -> int | None:
        return self._by_label.get(label)

    def label(self, node_id: int) -> str:
        return self.nodes[node_id].label

    def has_edge(self, source: int, target: int, relation: Relation) -> bool:
        return any(e.key == (source, target, relation) for e in self.edges)

    def without_edge(self, source: int, target: int, relation: Relation) -> "ConceptGraph":
        """Return a copy with one edge removed; node ids and flags are kept."""
        return ConceptGraph(self.nodes, tuple(e for e in self.edges if e.key != (source, target, relation)))

    def to_assertions(self) -> list[Assertion]:
        return [
            Assertion(
                self.label(e.source),
                e.relation,
                self.label(e.target),
                fragment=f"{self.label(e.source)} {e.relation.value} {self.label(e.target)}",
                utterance_index=e.provenance,
            )
            for e in self.edges
        ]


# --- rule table -------------------------------------------------------------

_PLACEHOLDER_RE = re.compile(r"<A>|<B>|\.\.\.")
_TOKEN = "\x00"
_ARTICLE = r"(?:(?:a|an|the)\s+)?"


@dataclass(frozen=True)
class Rule:
    priority: int
    pattern: str
    relation: Relation
    line_no: int | None = None
    regex: re.Pattern = field(default=None, compare=False, repr=False)

    @property
    def reflexive(self) -> bool:
        return "<B>" not in self.pattern

    @classmethod
    def compile(cls, priority: int, pattern: str, relation: Relation, line_no: int | None = None) -> "Rule":
        pieces = _PLACEHOLDER_RE.split(pattern)
        holders = _PLACEHOLDER_RE.findall(pattern)
        if holders.count("<A>") != 1 or holders.count("<B>") > 1:
            raise MalformedRule(f"pattern {pattern!r} needs exactly one <A> and at most one <B>", line_no)
        out = []
        for i, literal in enumerate(pieces):
            words = literal.split()
            if words:
                lead = r"\b" if re.match(r"\w", words[0]) else ""
                trail = r"\b" if re.search(r"\w$", words[-1]) else ""
                out.append(r"\s*" + lead + r"\s+".join(re.escape(w) for w in words) + trail + r"\s*")
            elif literal:
                out.append(r"\s+")
            if i < len(holders):
                h = holders[i]
                if h == "...":
                    out.append(r".+?")
                    continue
                if i > 0:
                    out.append(_ARTICLE)
                name = h[1]
                out.append(rf"{_TOKEN}(?P<{name}>\d+){_TOKEN}")
        # Wrapped in a lookahead so finditer reports overlapping matches.
        rx = re.compile("(?=(" + "".join(out) + "))", re.IGNORECASE)
        return cls(priority, pattern, relation, line_no, rx)


@dataclass(frozen=True)
class RuleTable:
    rules: tuple[Rule, ...]

    def __post_init__(self):
        # Stable sort: equal priorities keep file order.
        object.__setattr__(self, "rules", tuple(sorted(self.rules, key=lambda r: r.priority)))

    def __iter__(self):
        return iter(self.rules)

    def __len__(self):
        return len(self.rules)


def parse_rule_table(text: str) -> RuleTable:
    rules = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise MalformedRule("expected PRIORITY<TAB>PATTERN<TAB>RELATION", line_no)
        prio, pattern, rel = (p.strip() for p in parts)
        try:
            priority = int(prio)
        except ValueError:
            raise MalformedRule(f"priority {prio!r} is not an integer", line_no) from None
        try:
            relation = Relation.parse(rel)
        except ValueError:
            raise MalformedRule(f"unknown relation {rel!r}", line_no) from None
        rules.append(Rule.compile(priority, pattern, relation, line_no))
    return RuleTable(tuple(rules))


def load_rule_table(path: str | Path) -> RuleTable:
    return parse_rule_table(Path(path).read_text(encoding="utf-8"))


# --- extraction -------------------------------------------------------------


def _select_tokens(phenomena: Sequence[Phenomenon]) -> list[Phenomenon]:
    """Greedy non-overlapping cover, preferring the longest span at each start."""
    ordered = sorted(phenomena, key=lambda p: (p.span[0], -p.span[1], -p.capture_kind.precedence))
    chosen, last_end = [], -1
    for p in ordered:
        if p.span[0] >= last_end:
            chosen.append(p)
            last_end = p.span[1]
    return chosen


_DROP = set(QUOTE_CHARS) | {"}"}


def _mask(text: str, tokens: list[Phenomenon]) -> tuple[str, list[int]]:
    """Replace token spans by ``\\x00<i>\\x00`` and drop quote/annotation marks.

    Also returns, per masked character, the original offset just past it.
    """
    chars: list[str] = []
    ends: list[int] = []
    pos = 0

    def connector(lo: int, hi: int):
        i = lo
        while i < hi:
            if text.startswith(ANNOTATION_OPEN, i) and i + len(ANNOTATION_OPEN) <= hi:
                i += len(ANNOTATION_OPEN)
                continue
            if text[i] not in _DROP:
                chars.append(text[i])
                ends.append(i + 1)
            i += 1

    for i, p in enumerate(tokens):
        connector(pos, p.span[0])
        tok = f"{_TOKEN}{i}{_TOKEN}"
        chars.extend(tok)
        ends.extend([p.span[1]] * len(tok))
        pos = p.span[1]
    connector(pos, len(text))
    return "".join(chars), ends


def _widen(text: str, start: int, end: int) -> tuple[int, int]:
    """Grow a fragment outward over quote marks and annotation braces."""
    while start > 0 and text[start - 1] in QUOTE_CHARS:
        start -= 1
    if text[:start].endswith(ANNOTATION_OPEN):
        start -= len(ANNOTATION_OPEN)
    while end < len(text) and text[end] in _DROP:
        end += 1
    return start, end


def extract_assertions(t: Transcript, phenomena: Iterable[Phenomenon], rules: RuleTable) -> list[Assertion]:
    """Apply each rule to each utterance and emit the matched assertions.

    Output order is (utterance, rule priority, match position). A two-slot
    rule whose slots resolve to the same term is ignored; only reflexive
    rules (no ``<B>``) may produce self-relations.
    """
    by_utt: dict[int, list[Phenomenon]] = {}
    for p in phenomena:
        by_utt.setdefault(p.utterance_index, []).append(p)

    out: list[Assertion] = []
    for u in t.utterances:
        tokens = _select_tokens(by_utt.get(u.index, ()))
        if not tokens:
            continue
        masked, ends = _mask(u.text, tokens)
        for rule in rules:
            for m in rule.regex.finditer(masked):
                a = tokens[int(m.group("A"))]
                b = a if rule.reflexive else tokens[int(m.group("B"))]
                if not rule.reflexive and a.surface == b.surface:
                    continue
                s, e = _widen(u.text, a.span[0], ends[m.end(1) - 1])
                out.append(Assertion(a.surface, rule.relation, b.surface, u.text[s:e].strip(), None, u.index))
    return out


# --- graph construction -----------------------------------------------------


def _assemble(
    labels: list[str], edges: list[RelationEdge], base_flags: dict[int, frozenset] | None = None
) -> ConceptGraph:
    metaphor_sources = {e.source for e in edges if e.relation is Relation.METAPHOR_OF}
    nodes = []
    for i, label in enumerate(labels):
        flags = set((base_flags or {}).get(i, ()))
        if i in metaphor_sources:
            flags.add(NodeFlag.METAPHOR_TERM)
        nodes.append(ConceptNode(i, label, frozenset(flags)))
    return ConceptGraph(tuple(nodes), tuple(edges))


def _merge(labels: list[str], index: dict[str, int], term: str) -> int:
    if term not in index:
        index[term] = len(labels)
        labels.append(term)
    return index[term]


def build_graph(assertions: Iterable[Assertion]) -> ConceptGraph:
    """One node per distinct term (ids by first mention), one edge per (subject, object, relation)."""
    labels: list[str] = []
    index: dict[str, int] = {}
    edges: list[RelationEdge] = []
    seen = set()
    for a in assertions:
        s = _merge(labels, index, normalize_term(a.subject))
        o = _merge(labels, index, normalize_term(a.object))
        if (s, o, a.relation) in seen:
            continue
        seen.add((s, o, a.relation))
        edges.append(RelationEdge(s, o, a.relation, a.utterance_index))
    return _assemble(labels, edges)


_TRIPLE_RE = re.compile(r'\s*"((?:[^"\\]|\\.)*)"\s+([A-Za-z_]\w*)\s+"((?:[^"\\]|\\.)*)"\s*\.?\s*')


def import_triples(text: str, g: ConceptGraph | None = None) -> ConceptGraph:
    """Merge ``"subject" predicate "object"`` lines into a copy of ``g``.

    Imported edges carry the ``ImportedTriple`` provenance. The input graph
    is not modified.
    """
    g = g if g is not None else ConceptGraph()
    labels = [n.label for n in g.nodes]
    index = {label: i for i, label in enumerate(labels)}
    edges = list(g.edges)
    seen = {e.key for e in edges}
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        m = _TRIPLE_RE.fullmatch(line)
        if m is None:
            raise MalformedTriple(f"expected '\"subject\" predicate \"object\"', got {line[:40]!r}", line_no)
        subj, pred, obj = (normalize_term(m.group(1).replace('\\"', '"')), m.group(2),
                           normalize_term(m.group(3).replace('\\"', '"')))
        if not subj or not obj:
            raise MalformedTriple("empty subject or object", line_no)
        relation = PREDICATE_MAP.get(pred)
        if relation is None:
            raise UnknownPredicate(f"unknown predicate {pred!r}", line_no)
        s, o = _merge(labels, index, subj), _merge(labels, index, obj)
        if (s, o, relation) not in seen:
            seen.add((s, o, relation))
            edges.append(RelationEdge(s, o, relation, IMPORTED_TRIPLE))
    return _assemble(labels, edges, {n.id: n.flags for n in g.nodes})
