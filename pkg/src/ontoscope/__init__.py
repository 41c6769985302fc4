"""Detect circular definitions in dialogue transcripts.

Terms captured from a transcript are organised into a categorical concept
graph; a separate, closed catalog of existential modes interprets every
node. Cycles in the graph are reported with a suggested break point and
substitute categories, expressed only in categorical vocabulary.
"""

from ._version import __version__
from .categorical import (
    Assertion,
    ConceptGraph,
    ConceptNode,
    NodeFlag,
    Relation,
    RelationEdge,
    RuleTable,
    build_graph,
    extract_assertions,
    import_triples,
    load_rule_table,
    parse_rule_table,
)
from .config import Config
from .detection import Cycle, RecursionClass, RecursionKind, classify, find_cycles
from .estimator import Analysis, RecursionDetector
from .existential import (
    ExistentialMode,
    LayerVerdict,
    ModeAssignment,
    ModeMap,
    assign_modes,
    check_layer_separation,
    load_mode_map,
    parse_mode_map,
)
from .ingest import CaptureKind, Phenomenon, Transcript, Utterance, capture_phenomena, parse_transcript
from .reduction import (
    RecursionFinding,
    ReductionSuggestion,
    SubstitutionLexicon,
    load_lexicon,
    parse_lexicon,
    reduce,
    reduce_all,
)
from .report import Report, build_report, emit_report, export_graph_dot, render_finding

__all__ = [
    "Analysis", "Assertion", "CaptureKind", "ConceptGraph", "ConceptNode", "Config", "Cycle",
    "ExistentialMode", "LayerVerdict", "ModeAssignment", "ModeMap", "NodeFlag", "Phenomenon",
    "RecursionClass", "RecursionDetector", "RecursionFinding", "RecursionKind", "ReductionSuggestion",
    "Relation", "RelationEdge", "Report", "RuleTable", "SubstitutionLexicon", "Transcript", "Utterance",
    "__version__", "assign_modes", "build_graph", "build_report", "capture_phenomena",
    "check_layer_separation", "classify", "emit_report", "export_graph_dot", "extract_assertions",
    "find_cycles", "import_triples", "load_lexicon", "load_mode_map", "load_rule_table", "parse_lexicon",
    "parse_mode_map", "parse_rule_table", "parse_transcript", "reduce", "reduce_all", "render_finding",
]
