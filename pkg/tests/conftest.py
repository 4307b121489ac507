import pytest

_LINES: dict[int, str] = {}


class AcceptanceLog:
    def record(self, k: int, ok: bool, detail: str) -> None:
        line = f"ACCEPTANCE {k:2d} {'PASS' if ok else 'FAIL'}  {detail}"
        _LINES[k] = line
        print(line, flush=True)


@pytest.fixture
def acceptance():
    return AcceptanceLog()


def pytest_terminal_summary(terminalreporter):
    if not _LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_LINES):
        terminalreporter.write_line(_LINES[k])
