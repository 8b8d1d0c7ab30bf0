from pathlib import Path

import pytest

from aggrewrite.textio import parse_program

FIXTURES = Path(__file__).parent / "fixtures"

# criterion label -> (passed, detail), filled in by test_acceptance
ACCEPTANCE_RESULTS: dict[str, tuple[bool, str]] = {}


def load(name: str):
    return parse_program((FIXTURES / f"{name}.lp").read_text(), allow_reserved=True)


def prog(text: str):
    return parse_program(text, allow_reserved=True)


@pytest.fixture
def fixture_path():
    return lambda name: str(FIXTURES / f"{name}.lp")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label, (passed, detail) in ACCEPTANCE_RESULTS.items():
        terminalreporter.write_line(f"criterion {label}: {'PASS' if passed else 'FAIL'} - {detail}")
