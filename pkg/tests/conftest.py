from pathlib import Path

import pytest

from ontoscope.categorical import Assertion, Relation, build_graph
from ontoscope.config import bundled_config_dir, corpus_dir
from ontoscope.estimator import RecursionDetector

CORPUS = corpus_dir()
SCENARIOS = sorted(CORPUS.glob("scenario*.txt"))
GOLDEN = Path(__file__).parent / "golden"

_acceptance_results = []


@pytest.fixture(autouse=True)
def _isolate_config_env(monkeypatch):
    monkeypatch.delenv("ONTOSCOPE_CONFIG_DIR", raising=False)


@pytest.fixture
def detector():
    return RecursionDetector().fit()


@pytest.fixture
def config_dir():
    return bundled_config_dir()


def graph_from(edges):
    """Build a ConceptGraph from ``(subject, relation, object)`` label tuples."""
    return build_graph(
        Assertion(s, r if isinstance(r, Relation) else Relation(r), o, f"{s} {o}", None, i)
        for i, (s, r, o) in enumerate(edges)
    )


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _acceptance_results.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance_results:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
