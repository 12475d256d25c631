"""Shared fixtures and the acceptance summary hook.

Tests marked ``@pytest.mark.criterion(n, "title")`` are collected into a
final per-criterion PASS/FAIL table printed after the run, one line per
criterion.
"""
import pathlib

import pytest

FIXTURES = pathlib.Path(__file__).parent / "fixtures"

_results: dict[int, tuple[str, str]] = {}
_notes: dict[int, list[str]] = {}


def record_note(number: int, text: str) -> None:
    """Attach an informational line to a criterion's summary entry."""
    _notes.setdefault(number, []).append(text)


@pytest.fixture
def fixtures_dir() -> pathlib.Path:
    return FIXTURES


def read_fixture(name: str) -> str:
    return (FIXTURES / name).read_text()


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker and report.when == "call":
        number, title = marker.args
        verdict = "PASS" if report.outcome == "passed" else "FAIL"
        # keep the worst verdict if a criterion spans several tests
        if _results.get(number, ("PASS",))[0] != "FAIL":
            _results[number] = (verdict, title)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _results:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(_results):
        verdict, title = _results[number]
        terminalreporter.write_line(f"criterion {number:2d} [{verdict}] {title}")
        for note in _notes.get(number, []):
            terminalreporter.write_line(f"             note: {note}")
