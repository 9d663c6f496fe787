"""Shared pytest wiring.

BLAS threads are pinned to one (unless the environment already chose)
before anything imports numpy: multi-threaded reductions reorder float
sums, and the long benchmark descents would otherwise drift between
machines.

The acceptance tests under ``test_acceptance.py`` are the release gate; a
terminal section lists each criterion with an explicit PASS/FAIL so the
gate can be read off the bottom of any full run without scrolling through
the dot stream.
"""

from __future__ import annotations

import os

for _var in (
    "OMP_NUM_THREADS",
    "OPENBLAS_NUM_THREADS",
    "MKL_NUM_THREADS",
    "NUMEXPR_NUM_THREADS",
    "VECLIB_MAXIMUM_THREADS",
):
    os.environ.setdefault(_var, "1")

_ACCEPTANCE: list[tuple[str, str]] = []


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    _ACCEPTANCE.append((name, report.outcome))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _ACCEPTANCE:
        label = name.removeprefix("test_").replace("_", " ")
        verdict = {"passed": "PASS", "failed": "FAIL"}.get(outcome, outcome.upper())
        terminalreporter.write_line(f"{label}: {verdict}")
