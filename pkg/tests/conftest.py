import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from causex import load_model  # noqa: E402


@pytest.fixture
def m1():
    return load_model("arson_disjunctive")


@pytest.fixture
def m2():
    return load_model("arson_conjunctive")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
