from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from reesdomain import adjoin_identity, load_group, load_structure  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def z2():
    return load_group("z2")


@pytest.fixture(scope="session")
def s3():
    return load_group("s3")


@pytest.fixture(scope="session")
def a5():
    return load_group("a5")


@pytest.fixture(scope="session")
def s8():
    return load_structure("s8")


@pytest.fixture(scope="session")
def s8_singular():
    return load_structure("s8_singular")


@pytest.fixture(scope="session")
def s240():
    return load_structure("s240")


@pytest.fixture(scope="session")
def star240(s240):
    return adjoin_identity(s240)


@pytest.fixture(scope="session")
def star8(s8):
    return adjoin_identity(s8)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
