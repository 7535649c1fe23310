import pytest


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: long-running acceptance criteria")
    config._acceptance_lines = []


@pytest.fixture
def acceptance_log(request):
    """Record one PASS/FAIL line for an acceptance criterion; returns the verdict."""
    lines = request.config._acceptance_lines

    def log(number: int, ok: bool, detail: str) -> bool:
        lines.append((number, "PASS" if ok else "FAIL", detail))
        return ok

    return log


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for number, verdict, detail in sorted(lines):
        terminalreporter.write_line(f"criterion {number:2d}: {verdict}  {detail}")
