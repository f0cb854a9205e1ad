import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from quartet_arrow.consensus import ProfileSpace  # noqa: E402
from quartet_arrow.newick import parse_newick  # noqa: E402
from quartet_arrow.trees import LeafSet, enumerate_phylogenies, validate  # noqa: E402


@pytest.fixture(scope="session")
def abcde():
    return LeafSet.of("abcde")


@pytest.fixture(scope="session")
def vwxyz():
    return LeafSet.of("vwxyz")


@pytest.fixture(scope="session")
def star(abcde):
    return validate([("o", t) for t in "abcde"], abcde)


@pytest.fixture(scope="session")
def caterpillar(abcde):
    # u adj {a,b,m}, m adj {c,u,u2}, u2 adj {d,e,m}
    return validate([("u", "a"), ("u", "b"), ("u", "m"), ("m", "c"), ("m", "u2"), ("u2", "d"), ("u2", "e")], abcde)


@pytest.fixture(scope="session")
def trees5(abcde):
    return enumerate_phylogenies(abcde)


@pytest.fixture(scope="session")
def trees6():
    return enumerate_phylogenies(LeafSet.of("abcdef"))


@pytest.fixture(scope="session")
def space52(vwxyz):
    return ProfileSpace(vwxyz, 2)


@pytest.fixture
def newick():
    return parse_newick


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for line in results:
            terminalreporter.write_line(line)
