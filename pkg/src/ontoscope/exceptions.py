"""Exception hierarchy.

Every error that can be traced to a location in an input file carries the
offending ``line_no`` (1-based) so the CLI can report ``path:line: message``.
"""

from __future__ import annotations


class OntoscopeError(Exception):
    """Base class for all errors raised by this package."""

    def __init__(self, message: str, line_no: int | None = None):
        super().__init__(message)
        self.message = message
        self.line_no = line_no

    def __str__(self) -> str:
        if self.line_no is None:
            return self.message
        return f"line {self.line_no}: {self.message}"


class MalformedLine(OntoscopeError):
    """A transcript line lacks the ``[speaker] `` prefix."""


class UnterminatedAnnotation(OntoscopeError):
    def __init__(self, utterance_index: int, line_no: int | None = None):
        super().__init__(
            f"unterminated @term{{ annotation in utterance {utterance_index}", line_no
        )
        self.utterance_index = utterance_index


class MalformedRule(OntoscopeError):
    """A rule-table line does not follow ``PRIORITY<TAB>PATTERN<TAB>RELATION``."""


class MalformedTriple(OntoscopeError):
    pass


class UnknownPredicate(OntoscopeError):
    pass


class InvalidModeName(OntoscopeError):
    def __init__(self, rule_id: str, name: str, line_no: int | None = None):
        super().__init__(f"rule {rule_id!r}: unknown existential mode {name!r}", line_no)
        self.rule_id = rule_id
        self.name = name


class MalformedModeRule(OntoscopeError):
    pass


class MalformedLexiconEntry(OntoscopeError):
    pass


class CycleBudgetExceeded(OntoscopeError):
    def __init__(self, count: int):
        super().__init__(f"cycle enumeration exceeded budget ({count} cycles)")
        self.count = count


class ConfigError(OntoscopeError):
    pass


class LayerViolationError(OntoscopeError):
    """Raised by the analysis pipeline when a graph would leak reserved vocabulary."""
