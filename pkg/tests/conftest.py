import pytest

from parkentry.presets import BUILTIN

ACCEPTANCE_LINES: list[str] = []


def record_criterion(name: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def zoe():
    return BUILTIN["zoe"].dims


@pytest.fixture(scope="session")
def midsized():
    return BUILTIN["mid-sized"].dims


@pytest.fixture(scope="session")
def corsa():
    return BUILTIN["corsa"].dims
