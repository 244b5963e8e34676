import sys
from pathlib import Path

import pytest

from graph_sections import ExplicitFinite, RegularTree, ZLine, ZSquare

sys.path.insert(0, str(Path(__file__).parent))


def undirected_families():
    """(name, graph, canonical root) for the infinite undirected built-ins."""
    return [
        ("zline", ZLine(), 0),
        ("zsquare", ZSquare(), (0, 0)),
        ("tree3", RegularTree(3), ()),
    ]


@pytest.fixture(params=undirected_families(), ids=lambda p: p[0])
def family(request):
    return request.param


@pytest.fixture
def triangle():
    return ExplicitFinite([("a", "b"), ("b", "c"), ("c", "a")])


_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py::test_criterion_" in report.nodeid:
        _ACCEPTANCE[report.nodeid.split("::")[-1]] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE, key=lambda n: int(n.split("_")[2])):
        verdict = "PASS" if _ACCEPTANCE[name] == "passed" else "FAIL"
        label = " ".join(name.split("_")[3:])
        terminalreporter.write_line(f"criterion {name.split('_')[2]} ({label}): {verdict}")
