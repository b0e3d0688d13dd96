from __future__ import annotations

import pytest

_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Record one summary line per acceptance criterion, then assert it."""

    def record(n: int, ok: bool, detail: str):
        line = f"CRITERION {n}: {'PASS' if ok else 'FAIL'} {detail}"
        _LINES.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
