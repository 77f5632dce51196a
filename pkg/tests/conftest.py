"""Shared fixtures plus the acceptance summary block.

Tests named test_criterion_NN_* in test_acceptance.py are tracked and a
one-line PASS/FAIL verdict per criterion is appended to the terminal
summary, so the acceptance gate is readable at a glance.
"""

import re

_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)")

_outcomes: dict = {}


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    key = int(m.group(1))
    label = m.group(2).replace("_", " ")
    state = _outcomes.get(key, (label, "PASS"))[1]
    if report.failed:
        state = "FAIL"
    elif report.skipped and state != "FAIL":
        state = "SKIP"
    _outcomes[key] = (label, state)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for key in sorted(_outcomes):
        label, state = _outcomes[key]
        dots = "." * max(2, 58 - len(label))
        tr.write_line(f"criterion {key:02d}  {label} {dots} {state}")
