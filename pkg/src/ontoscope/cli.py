"""Command-line driver.

Exit codes: 0 clean, 1 findings (``analyze``) or layer violations
(``check-layers``), 2 input or configuration error. With several
transcripts the worst code wins.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ._version import __version__
from .config import OUTPUT_FORMATS, Config
from .estimator import RecursionDetector
from .exceptions import (
    ConfigError,
    InvalidModeName,
    MalformedLexiconEntry,
    MalformedModeRule,
    MalformedRule,
    MalformedTriple,
    OntoscopeError,
    UnknownPredicate,
)
from .ingest import parse_transcript
from .report import emit_report, emit_text, export_graph_dot

EXIT_CLEAN, EXIT_FOUND, EXIT_ERROR = 0, 1, 2


def _positive_int(s: str) -> int:
    try:
        v = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {s!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _add_config_args(p: argparse.ArgumentParser):
    p.add_argument("files", nargs="+", type=Path, metavar="FILE", help="transcript file(s)")
    p.add_argument("--config-dir", type=Path, help="directory with rules.tsv, modes.tsv, lexicon.txt")
    p.add_argument("--rules", type=Path, help="rule table file")
    p.add_argument("--modes", type=Path, help="mode map file")
    p.add_argument("--lexicon", type=Path, help="substitution lexicon file")
    p.add_argument("--triples", type=Path, help="triple file merged into every graph")
    p.add_argument("--max-len", type=_positive_int, default=8, help="longest cycle to report (default 8)")
    p.add_argument("--cycle-budget", type=_positive_int, default=10_000, help="cycle enumeration cap")
    p.add_argument("--out", type=Path, help="write output here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ontoscope", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="detect definitional recursion and suggest break points")
    _add_config_args(p)
    p.add_argument("--format", choices=OUTPUT_FORMATS, default="text")

    p = sub.add_parser("check-layers", help="verify the categorical/existential layer contract")
    _add_config_args(p)

    p = sub.add_parser("export-dot", help="write the concept graph as DOT with break points marked")
    _add_config_args(p)
    return parser


def _error(path, exc: Exception):
    line = getattr(exc, "line_no", None)
    message = getattr(exc, "message", None) or str(exc)
    where = f"{path}:{line}" if line is not None else f"{path}"
    print(f"{where}: error: {message}", file=sys.stderr)


def _detector(args, fmt: str = "text") -> RecursionDetector:
    cfg = Config.load(
        args.config_dir,
        rules=args.rules,
        modes=args.modes,
        lexicon=args.lexicon,
        max_cycle_len=args.max_len,
        cycle_budget=args.cycle_budget,
        output_format=fmt,
    )
    if args.triples is not None and not args.triples.is_file():
        raise ConfigError(f"triple file not found: {args.triples}")
    det = RecursionDetector(
        rules=cfg.rule_table_path,
        modes=cfg.mode_map_path,
        lexicon=cfg.lexicon_path,
        triples=args.triples,
        max_len=cfg.max_cycle_len,
        cycle_budget=cfg.cycle_budget,
    )
    try:
        return det.fit()
    except OntoscopeError as exc:
        exc.config_path = _source_of(exc, cfg, args.triples)
        raise


def _source_of(exc: OntoscopeError, cfg: Config, triples):
    if isinstance(exc, MalformedRule):
        return cfg.rule_table_path
    if isinstance(exc, (InvalidModeName, MalformedModeRule)):
        return cfg.mode_map_path
    if isinstance(exc, MalformedLexiconEntry):
        return cfg.lexicon_path
    if isinstance(exc, (MalformedTriple, UnknownPredicate)):
        return triples
    return "config"


def _read(path: Path):
    return parse_transcript(path.read_text(encoding="utf-8"), path.name)


def _write(out: Path | None, chunks: list[str]):
    text = "".join(chunks)
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8")


def _run(args) -> int:
    fmt = getattr(args, "format", "text")
    try:
        det = _detector(args, fmt)
    except OntoscopeError as exc:
        _error(getattr(exc, "config_path", "config"), exc)
        return EXIT_ERROR
    except (OSError, UnicodeDecodeError) as exc:
        _error("config", exc)
        return EXIT_ERROR

    worst = EXIT_CLEAN
    chunks: list[str] = []
    for path in args.files:
        try:
            transcript = _read(path)
            if args.command == "check-layers":
                verdict = det.interpret(transcript).verdict
                if verdict.ok:
                    chunks.append(f"{path}: ok\n")
                    code = EXIT_CLEAN
                else:
                    chunks.extend(f"{path}: violation: {v}\n" for v in verdict.violations)
                    code = EXIT_FOUND
            else:
                analysis = det.analyze(transcript)
                report = analysis.report
                if args.command == "export-dot" or fmt == "dot":
                    chunks.append(export_graph_dot(analysis.graph, report.findings))
                elif fmt == "structured":
                    chunks.append("---\n" + emit_report(report))
                else:
                    chunks.append(emit_text(report))
                code = EXIT_FOUND if (report.findings and args.command == "analyze") else EXIT_CLEAN
        except OntoscopeError as exc:
            _error(path, exc)
            code = EXIT_ERROR
        except (OSError, UnicodeDecodeError) as exc:
            _error(path, exc)
            code = EXIT_ERROR
        worst = max(worst, code)

    try:
        _write(args.out, chunks)
    except OSError as exc:
        _error(args.out, exc)
        return EXIT_ERROR
    return worst


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return _run(args)


if __name__ == "__main__":
    sys.exit(main())
