from __future__ import annotations

import itertools

import pytest


def even_words(max_entry: int, max_len: int):
    """All non-empty even words with entries in 1..max_entry and length <= max_len."""
    for n in range(2, max_len + 1, 2):
        yield from itertools.product(range(1, max_entry + 1), repeat=n)


@pytest.fixture
def small_words():
    return list(even_words(3, 4))


_CRITERIA: dict[int, str] = {}


@pytest.fixture
def report_criterion():
    """Print a PASS/FAIL line and keep it for the end-of-run summary."""

    def report(number: int, title: str, passed: bool, detail: str) -> bool:
        line = f"{'PASS' if passed else 'FAIL'} criterion {number:>2}: {title} ({detail})"
        print(line)
        _CRITERIA[number] = line
        return passed

    return report


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for n in sorted(_CRITERIA):
            terminalreporter.write_line(_CRITERIA[n])
