import pytest

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_log(capsys):
    def emit(line: str) -> None:
        _ACCEPTANCE_LINES.append(line)
        with capsys.disabled():
            print("\n" + line)

    return emit


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
