from pathlib import Path

import pytest

from statemine.metamodel import augment_opposites, shipped_metamodel

FIXTURES = Path(__file__).parent / "fixtures"
CORPUS = FIXTURES / "corpus"


@pytest.fixture(scope="session")
def java_mm():
    return shipped_metamodel("java_subset")


@pytest.fixture(scope="session")
def java_mm_aug(java_mm):
    return augment_opposites(java_mm)


@pytest.fixture(scope="session")
def sm_mm():
    return shipped_metamodel("statemachine")


_CRITERIA: dict[int, str] = {}


def record_criterion(number: int, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}"
    _CRITERIA[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for n in sorted(_CRITERIA):
            terminalreporter.write_line(_CRITERIA[n])
