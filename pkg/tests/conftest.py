import pytest

ACCEPTANCE: dict[int, tuple[str, bool]] = {}


def record(criterion: int, text: str, passed: bool) -> bool:
    ok = ACCEPTANCE.get(criterion, (text, True))[1] and passed
    ACCEPTANCE[criterion] = (text, ok)
    return passed


@pytest.fixture
def acceptance():
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        text, ok = ACCEPTANCE[n]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {n:>2}. {text}")
