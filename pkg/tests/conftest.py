import sys
from pathlib import Path

import pytest

# lets test modules import the brute-force helpers as a plain module
sys.path.insert(0, str(Path(__file__).parent))

_ACCEPTANCE: list[str] = []


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line per criterion; returns the verdict for ``assert``."""

    def record(criterion: str, ok: bool, detail: str) -> bool:
        line = f"{criterion} {'PASS' if ok else 'FAIL'}: {detail}"
        _ACCEPTANCE.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE):
            terminalreporter.write_line(line)
