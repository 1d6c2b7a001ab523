import pytest

_LINES = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_LINES] = []


@pytest.fixture
def report(request):
    """``report(n, name, ok, detail)`` prints one PASS/FAIL line and keeps it for the summary."""
    lines = request.config.stash[_LINES]

    def emit(number, name, ok, detail=""):
        line = f"criterion {number} {'PASS' if ok else 'FAIL'}: {name}"
        if detail:
            line += f" ({detail})"
        print(line)
        lines.append(line)
        return ok

    return emit


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
