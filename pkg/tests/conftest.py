import json
import sys
from pathlib import Path

import pytest

from hyperjump.lattice import BuildingSet, parse_arrangement

FIXTURES = Path(__file__).parent / "fixtures"


def load(name: str):
    return parse_arrangement((FIXTURES / f"{name}.json").read_text())


def member(g: BuildingSet, *hyperplanes: int) -> int:
    """Index of the member cut out by exactly these input hyperplanes."""
    want = tuple(sorted(hyperplanes))
    for i in g.nonzero:
        if g.label(i) == want:
            return i
    raise KeyError(want)


@pytest.fixture
def three_lines():
    # x-y, x+y, x: three concurrent reduced lines
    return load("three_lines")


@pytest.fixture
def four_planes_first():
    return load("four_planes_first")


@pytest.fixture
def four_planes_second():
    return load("four_planes_second")


def fixture_path(name: str) -> str:
    return str(FIXTURES / f"{name}.json")


def document(name: str) -> dict:
    return json.loads((FIXTURES / f"{name}.json").read_text())


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance and acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(acceptance.RESULTS):
            terminalreporter.write_line(line)
