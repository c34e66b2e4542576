from pathlib import Path

import pytest

from gbaction.fixtures import load_fixture

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

GRAPH_FIXTURES = ["edge_vw", "loop", "chain3", "toeplitz", "rose2"]
LABELLED_FIXTURES = ["one_edge", "four_vertex", "lumped"]


def fixture_path(name: str) -> Path:
    return FIXTURES / f"{name}.fix"


def load(name: str):
    return load_fixture(fixture_path(name))


@pytest.fixture
def fixtures_dir():
    return FIXTURES


def pytest_terminal_summary(terminalreporter):
    import sys
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
