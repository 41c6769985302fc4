"""scikit-learn style front end for the whole analysis pipeline.

:class:`RecursionDetector` behaves like a stateless transformer: ``fit``
only resolves and validates its configuration, ``transform`` maps
transcripts to :class:`~ontoscope.report.Report` objects and ``predict``
returns 1 for every transcript containing at least one definitional cycle.
It supports ``get_params``/``set_params``/``clone`` and can sit inside an
sklearn ``Pipeline``.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .categorical import Assertion, ConceptGraph, build_graph, extract_assertions, import_triples
from .config import LEXICON_FILE, MODES_FILE, RULES_FILE, default_config_dir
from .detection import DEFAULT_CYCLE_BUDGET, DEFAULT_MAX_LEN, Cycle, find_cycles
from .exceptions import LayerViolationError
from .existential import LayerVerdict, ModeAssignment, assign_modes, check_layer_separation
from .ingest import Phenomenon, Transcript, capture_phenomena
from .reduction import RecursionFinding, reduce_all
from .report import Report, build_report
from .validation import (
    check_lexicon,
    check_mode_map,
    check_positive_int,
    check_rule_table,
    check_transcript,
    check_transcripts,
)

__all__ = ["Analysis", "RecursionDetector"]


@dataclass(frozen=True)
class Analysis:
    """Every intermediate product of one pipeline run."""

    transcript: Transcript
    phenomena: tuple[Phenomenon, ...]
    assertions: tuple[Assertion, ...]
    graph: ConceptGraph
    modes: ModeAssignment
    verdict: LayerVerdict
    cycles: tuple[Cycle, ...] = ()
    findings: tuple[RecursionFinding, ...] = ()
    report: Report | None = None


class RecursionDetector(TransformerMixin, BaseEstimator):
    """Detect circular definitions in dialogue transcripts.

    Parameters
    ----------
    rules, modes, lexicon : path, loaded object or None
        Rule table, mode map and substitution lexicon. ``None`` picks the
        file from the default config directory (``ONTOSCOPE_CONFIG_DIR``
        or the bundled defaults).
    triples : path or None
        Optional triple file merged into every transcript graph.
    max_len : int
        Longest cycle to report.
    cycle_budget : int
        Cap on enumerated cycles per transcript.
    annotations : bool
        Whether ``@term{...}`` markers are captured.
    """

    def __init__(
        self,
        rules=None,
        modes=None,
        lexicon=None,
        triples=None,
        max_len=DEFAULT_MAX_LEN,
        cycle_budget=DEFAULT_CYCLE_BUDGET,
        annotations=True,
    ):
        self.rules = rules
        self.modes = modes
        self.lexicon = lexicon
        self.triples = triples
        self.max_len = max_len
        self.cycle_budget = cycle_budget
        self.annotations = annotations

    def fit(self, X=None, y=None):
        base = default_config_dir()
        self.rule_table_ = check_rule_table(self.rules if self.rules is not None else base / RULES_FILE)
        self.mode_map_ = check_mode_map(self.modes if self.modes is not None else base / MODES_FILE)
        self.lexicon_ = check_lexicon(self.lexicon if self.lexicon is not None else base / LEXICON_FILE)
        self.max_len_ = check_positive_int(self.max_len, "max_len")
        self.cycle_budget_ = check_positive_int(self.cycle_budget, "cycle_budget")
        self.triples_text_ = Path(self.triples).read_text(encoding="utf-8") if self.triples is not None else ""
        return self

    def interpret(self, x) -> Analysis:
        """Run capture, extraction, graph building and mode assignment only."""
        check_is_fitted(self, "rule_table_")
        t = check_transcript(x)
        phenomena = capture_phenomena(t, self.lexicon_.keys(), self.annotations)
        assertions = extract_assertions(t, phenomena, self.rule_table_)
        g = build_graph(assertions)
        if self.triples_text_:
            g = import_triples(self.triples_text_, g)
        modes = assign_modes(g, self.mode_map_)
        verdict = check_layer_separation(g, modes, self.lexicon_)
        return Analysis(t, tuple(phenomena), tuple(assertions), g, modes, verdict)

    def analyze(self, x) -> Analysis:
        """Full pipeline for one transcript.

        Raises :class:`LayerViolationError` when a concept term spells an
        existential mode, since rendering it would leak that vocabulary.
        """
        a = self.interpret(x)
        leaked = [v for v in a.verdict.violations if v.kind != "lexicon"]
        if leaked:
            raise LayerViolationError(
                "categorical terms collide with reserved vocabulary: "
                + "; ".join(str(v) for v in leaked)
                + " (see check-layers)"
            )
        cycles = find_cycles(a.graph, self.max_len_, self.cycle_budget_)
        findings = reduce_all(cycles, a.graph, a.modes, self.lexicon_)
        report = build_report(a.transcript.source_name, a.graph, a.modes, findings)
        return Analysis(
            a.transcript, a.phenomena, a.assertions, a.graph, a.modes, a.verdict,
            tuple(cycles), report.findings, report,
        )

    def transform(self, X) -> list[Report]:
        return [self.analyze(t).report for t in check_transcripts(X)]

    def predict(self, X) -> np.ndarray:
        return np.array([int(bool(r.findings)) for r in self.transform(X)], dtype=int)

    def check_layers(self, X) -> list[LayerVerdict]:
        return [self.interpret(t).verdict for t in check_transcripts(X)]
