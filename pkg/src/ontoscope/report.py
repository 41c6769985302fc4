"""Render findings in categorical vocabulary only.

Three outputs: one sentence pair per finding, a stable YAML document per
transcript, and a DOT digraph with cycle edges highlighted and each break
point dashed. Nothing produced here mentions an existential mode.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import yaml

from ._version import __version__
from .categorical import ConceptGraph
from .existential import ModeAssignment
from .reduction import RecursionFinding

__all__ = [
    "Report",
    "build_report",
    "emit_report",
    "emit_text",
    "export_graph_dot",
    "render_finding",
    "report_document",
]


def _q(term: str) -> str:
    return f"'{term}'"


def _alternatives(subs: Sequence[str]) -> str:
    quoted = [_q(s) for s in subs]
    if len(quoted) == 1:
        return quoted[0]
    return ", ".join(quoted[:-1]) + " or " + quoted[-1]


def render_finding(f: RecursionFinding, g: ConceptGraph) -> str:
    """Two sentences: the loop, read from the pivot onward, then the suggestion."""
    seq = f.cycle.node_sequence
    k = seq.index(f.suggestion.pivot)
    chain = [g.label(v) for v in seq[k:] + seq[:k]]
    pivot = chain[0]
    if len(chain) == 1:
        first = f"Detected recursion: {_q(pivot)} is tied to itself."
    else:
        links = "".join(f", which depends on {_q(t)}" for t in chain[2:] + [pivot])
        first = f"Detected recursion: {_q(pivot)} is tied to {_q(chain[1])}{links}."
    subs = f.suggestion.substitutes
    if subs:
        target = g.label(f.suggestion.break_edge.target)
        second = f"Consider {_q(pivot)} through {_alternatives(subs)} instead of {_q(target)}."
    else:
        second = f"Consider re-grounding {_q(pivot)} in non-circular categories."
    return f"{first} {second}"


def _dot_str(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_graph_dot(g: ConceptGraph, findings: Iterable[RecursionFinding] = ()) -> str:
    findings = list(findings)
    on_cycle = {e.key for f in findings for e in f.cycle.edge_sequence}
    breaks = {f.suggestion.break_edge.key for f in findings}
    lines = ["digraph G {"]
    for n in g.nodes:
        lines.append(f"  n{n.id} [label={_dot_str(n.label)}];")
    for e in g.edges:
        attrs = [f"label={_dot_str(e.relation.value)}"]
        if e.key in on_cycle:
            attrs += ['color="red"', "penwidth=2"]
        if e.key in breaks:
            attrs += ['style="dashed"', "breakpoint=true"]
        lines.append(f"  n{e.source} -> n{e.target} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Report:
    source_name: str
    graph: ConceptGraph
    findings: tuple[RecursionFinding, ...]
    graph_stats: dict = field(default_factory=dict)
    tool_version: str = __version__


def build_report(
    source_name: str, g: ConceptGraph, modes: ModeAssignment, findings: Iterable[RecursionFinding]
) -> Report:
    """Render every finding and attach graph statistics.

    ``dual_interpretation_total`` audits that each node received exactly one
    interpretation in the existential layer.
    """
    rendered = tuple(replace(f, rendered=render_finding(f, g)) for f in findings)
    stats = {
        "nodes": len(g.nodes),
        "edges": len(g.edges),
        "findings": len(rendered),
        "assigned_nodes": len(modes),
        "dual_interpretation_total": modes.is_total_over(g),
    }
    return Report(source_name, g, rendered, stats)


def _finding_doc(f: RecursionFinding, g: ConceptGraph) -> dict:
    e = f.suggestion.break_edge
    return {
        "cycle": [g.label(v) for v in f.cycle.node_sequence],
        "class": f.recursion_class.name,
        "break_edge": {"from": g.label(e.source), "to": g.label(e.target), "relation": e.relation.value},
        "substitutes": list(f.suggestion.substitutes),
        "text": f.rendered if f.rendered is not None else render_finding(f, g),
    }


def report_document(r: Report) -> dict:
    return {
        "source": r.source_name,
        "version": r.tool_version,
        "stats": dict(r.graph_stats),
        "findings": [_finding_doc(f, r.graph) for f in r.findings],
    }


def emit_report(r: Report) -> str:
    """Serialize a report as a YAML document with a fixed key order."""
    return yaml.safe_dump(
        report_document(r), sort_keys=False, allow_unicode=True, default_flow_style=False, width=4096
    )


def emit_text(r: Report) -> str:
    if not r.findings:
        return f"{r.source_name}: no recursion detected\n"
    lines = [f"{r.source_name}: {len(r.findings)} recursion finding(s)"]
    lines += [f"  {f.rendered}" for f in r.findings]
    return "\n".join(lines) + "\n"
