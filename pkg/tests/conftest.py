"""Shared test configuration.

Collects the outcome of every ``test_criterion_NN_*`` function in
tests/test_acceptance.py and prints one pass/fail line per criterion at
the end of the run, together with any measurements the tests recorded.
"""

import re

import pytest

CRITERIA = {
    1: "reduction to exact global GPR (rectangular, h=1)",
    2: "localized posterior vs direct-inverse oracle",
    3: "ridge-regression equivalence and objective minimization",
    4: "heteroscedastic-noise equivalence",
    5: "marginal-likelihood gradient vs finite differences",
    6: "Doppler comparison: localized beats global over 10 seeds",
    7: "Yacht benchmark ordering with Wilcoxon significance",
    8: "Wilcoxon exactness vs sign-pattern enumeration",
    9: "sparsification speed vs cubic-cost extrapolation",
    10: "localized Gram PSD and compact-support samples",
}

_CRITERION_RE = re.compile(r"test_criterion_(\d+)")

_outcomes: dict[int, str] = {}
_details: dict[int, list[str]] = {}


def _criterion_number(nodeid: str):
    match = _CRITERION_RE.search(nodeid)
    return int(match.group(1)) if match else None


@pytest.fixture
def acceptance_log(request):
    """Callable that records a measurement line for the current criterion."""
    number = _criterion_number(request.node.name)

    def record(text: str) -> None:
        _details.setdefault(number, []).append(str(text))

    return record


def pytest_runtest_logreport(report):
    number = _criterion_number(report.nodeid)
    if number is None:
        return
    if report.skipped:
        _outcomes[number] = "SKIP"
        reason = report.longrepr[2] if isinstance(report.longrepr, tuple) else ""
        if reason:
            _details.setdefault(number, []).append(str(reason))
    elif report.failed:
        _outcomes[number] = "FAIL"
    elif report.when == "call" and report.passed:
        _outcomes.setdefault(number, "PASS")


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERIA):
        status = _outcomes.get(number, "NOT RUN")
        terminalreporter.write_line(
            f"criterion {number:2d} [{status}] {CRITERIA[number]}")
        for line in _details.get(number, ()):
            terminalreporter.write_line(f"             {line}")
