"""The existential layer: a closed catalog of modes assigned to concept nodes.

Modes live in a :class:`ModeAssignment` keyed by node id. They are never
written into the :class:`~ontoscope.categorical.ConceptGraph` and never reach
rendered output; :func:`check_layer_separation` verifies both properties.

The nine-mode catalog is a deliberately small, fixed approximation. Mode
rules map terms onto it; anything unmatched is ``Undetermined`` so that the
assignment is always total.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping

from .categorical import IMPORTED_TRIPLE, ConceptGraph, ConceptNode, NodeFlag
from .exceptions import InvalidModeName, MalformedModeRule
from .ingest import normalize_term

__all__ = [
    "DEFAULT_PROVENANCE",
    "PRONOUN_CLASSES",
    "ExistentialMode",
    "LayerVerdict",
    "ModeAssignment",
    "ModeMap",
    "ModeRule",
    "Violation",
    "assign_modes",
    "check_layer_separation",
    "is_mode_name",
    "load_mode_map",
    "mode_tokens",
    "parse_mode_map",
]

DEFAULT_PROVENANCE = "Default"


class ExistentialMode(enum.Enum):
    DASEIN = "Dasein"
    CARE = "Care"
    OPENNESS = "Openness"
    TEMPORALITY = "Temporality"
    UNDERSTANDING = "Understanding"
    BEING_IN_THE_WORLD = "BeingInTheWorld"
    NON_SPATIO_TEMPORAL = "NonSpatioTemporal"
    DISCLOSURE = "Disclosure"
    UNDETERMINED = "Undetermined"

    @classmethod
    def parse(cls, name: str) -> "ExistentialMode":
        key = _squash(name)
        for mode in cls:
            if _squash(mode.value) == key:
                return mode
        raise ValueError(name)


def _squash(s: str) -> str:
    return re.sub(r"[\W_]+", "", s.lower())


_MODE_KEYS = frozenset(_squash(m.value) for m in ExistentialMode) | {"nonspatiotemporalbeing"}
_MAX_MODE_WORDS = 4
_WORD_RE = re.compile(r"\w+")


def is_mode_name(text: str) -> bool:
    """True when ``text`` spells a catalog mode, ignoring case, spacing and hyphens."""
    return _squash(text) in _MODE_KEYS


def mode_tokens(text: str) -> list[str]:
    """Return every word or short word run in ``text`` that spells a mode name."""
    words = _WORD_RE.findall(text)
    hits = []
    for i in range(len(words)):
        for n in range(1, _MAX_MODE_WORDS + 1):
            if i + n > len(words):
                break
            run = "".join(words[i : i + n])
            if _squash(run) in _MODE_KEYS:
                hits.append(" ".join(words[i : i + n]))
    return hits


PRONOUN_CLASSES: Mapping[str, frozenset] = MappingProxyType(
    {
        "agentive": frozenset({"i", "we", "you", "they", "us", "me", "ourselves", "myself", "themselves"}),
        "reflexive": frozenset({"itself", "oneself", "self", "ourselves", "myself", "themselves"}),
    }
)

_MATCHER_KINDS = ("label", "regex", "flag", "pronoun")


@dataclass(frozen=True)
class ModeRule:
    rule_id: str
    kind: str
    argument: str
    mode: ExistentialMode
    _regex: re.Pattern | None = field(default=None, compare=False, repr=False)

    @classmethod
    def create(cls, rule_id: str, matcher: str, mode_name: str, line_no: int | None = None) -> "ModeRule":
        try:
            mode = ExistentialMode.parse(mode_name)
        except ValueError:
            raise InvalidModeName(rule_id, mode_name, line_no) from None
        kind, sep, arg = matcher.partition(":")
        kind = kind.strip()
        arg = arg.strip()
        if not sep or kind not in _MATCHER_KINDS or not arg:
            raise MalformedModeRule(
                f"rule {rule_id!r}: matcher must be one of label:/regex:/flag:/pronoun:, got {matcher!r}", line_no
            )
        rx = None
        if kind == "label":
            arg = normalize_term(arg)
        elif kind == "regex":
            try:
                rx = re.compile(arg)
            except re.error as exc:
                raise MalformedModeRule(f"rule {rule_id!r}: bad regex: {exc}", line_no) from None
        elif kind == "flag":
            try:
                NodeFlag(arg)
            except ValueError:
                raise MalformedModeRule(f"rule {rule_id!r}: unknown flag {arg!r}", line_no) from None
        elif arg not in PRONOUN_CLASSES:
            raise MalformedModeRule(f"rule {rule_id!r}: unknown pronoun class {arg!r}", line_no)
        return cls(rule_id, kind, arg, mode, rx)

    def matches(self, node: ConceptNode) -> bool:
        if self.kind == "label":
            return node.label == self.argument
        if self.kind == "regex":
            return self._regex.search(node.label) is not None
        if self.kind == "flag":
            return NodeFlag(self.argument) in node.flags
        return node.label in PRONOUN_CLASSES[self.argument]


@dataclass(frozen=True)
class ModeMap:
    rules: tuple[ModeRule, ...] = ()

    @classmethod
    def from_rules(cls, rules: Iterable[tuple[str, str, str]]) -> "ModeMap":
        return cls(tuple(ModeRule.create(*r) for r in rules))

    def __len__(self):
        return len(self.rules)


def parse_mode_map(text: str) -> ModeMap:
    rules = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = [p.strip() for p in line.split("\t")]
        if len(parts) != 3 or not all(parts):
            raise MalformedModeRule("expected RULE_ID<TAB>MATCHER<TAB>MODE", line_no)
        rules.append(ModeRule.create(*parts, line_no=line_no))
    return ModeMap(tuple(rules))


def load_mode_map(path: str | Path) -> ModeMap:
    return parse_mode_map(Path(path).read_text(encoding="utf-8"))


@dataclass(frozen=True)
class ModeAssignment:
    modes: Mapping[int, ExistentialMode]
    rule_provenance: Mapping[int, str]

    def __post_init__(self):
        object.__setattr__(self, "modes", dict(self.modes))
        object.__setattr__(self, "rule_provenance", dict(self.rule_provenance))

    def __getitem__(self, node_id: int) -> ExistentialMode:
        return self.modes[node_id]

    def __len__(self):
        return len(self.modes)

    def is_total_over(self, g: ConceptGraph) -> bool:
        return set(self.modes) == {n.id for n in g.nodes}


def assign_modes(g: ConceptGraph, mapping: ModeMap) -> ModeAssignment:
    """First matching rule wins; unmatched nodes get ``Undetermined``."""
    modes, prov = {}, {}
    for node in g.nodes:
        for rule in mapping.rules:
            if rule.matches(node):
                modes[node.id], prov[node.id] = rule.mode, rule.rule_id
                break
        else:
            modes[node.id], prov[node.id] = ExistentialMode.UNDETERMINED, DEFAULT_PROVENANCE
    return ModeAssignment(modes, prov)


@dataclass(frozen=True)
class Violation:
    kind: str  # node | totality | provenance | lexicon
    item: str

    def __str__(self):
        return f"{self.kind}: {self.item}"


@dataclass(frozen=True)
class LayerVerdict:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


def check_layer_separation(g: ConceptGraph, a: ModeAssignment, lexicon=None) -> LayerVerdict:
    """Check that the categorical and existential layers do not mix.

    Flags node labels that spell a mode name, an assignment that is not
    total over ``g``, edge provenance that is neither an utterance index nor
    an imported triple and, when ``lexicon`` is given, substitute phrases
    that spell a mode name.
    """
    out = []
    for n in g.nodes:
        if is_mode_name(n.label):
            out.append(Violation("node", n.label))
    node_ids = {n.id for n in g.nodes}
    for nid in sorted(node_ids - set(a.modes)):
        out.append(Violation("totality", f"node {g.label(nid)!r} has no mode"))
    for nid in sorted(set(a.modes) - node_ids):
        out.append(Violation("totality", f"mode assigned to unknown node id {nid}"))
    for e in g.edges:
        p = e.provenance
        if not ((isinstance(p, int) and not isinstance(p, bool) and p >= 0) or p == IMPORTED_TRIPLE):
            out.append(Violation("provenance", f"edge {g.label(e.source)!r}->{g.label(e.target)!r}: {p!r}"))
    if lexicon is not None:
        for term, phrase in lexicon.mode_name_substitutes():
            out.append(Violation("lexicon", f"{term!r} => {phrase!r}"))
    return LayerVerdict(tuple(out))
