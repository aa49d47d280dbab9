from __future__ import annotations

import pytest

from laurentkit.rings import PRESETS

ACCEPTANCE_LINES: list[str] = []


def record(line: str) -> None:
    """Queue a line for the acceptance summary printed at the end of the session."""
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(params=["gf2", "gf4-frob", "z"])
def ring(request):
    return PRESETS[request.param]()


@pytest.fixture
def gf2():
    return PRESETS["gf2"]()


@pytest.fixture
def gf4f():
    return PRESETS["gf4-frob"]()


@pytest.fixture
def zz():
    return PRESETS["z"]()
