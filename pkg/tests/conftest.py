import pytest


@pytest.fixture(scope="session")
def verdicts(request):
    """Collects one line per acceptance criterion for the terminal summary."""
    lines = getattr(request.config, "_verdicts", None)
    if lines is None:
        lines = request.config._verdicts = []
    return lines


def pytest_terminal_summary(terminalreporter, config):
    lines = getattr(config, "_verdicts", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
